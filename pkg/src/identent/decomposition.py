"""Slater and Schmidt decompositions of two-particle states.

Fermions::

    C = sum_i (a_i / sqrt 2) (u_{2i-1} u_{2i}^T - u_{2i} u_{2i-1}^T)

Bosons::

    C = sum_i b_i u_i u_i^T

Distinguishable particles use the ordinary SVD ``C = sum_k s_k u_k w_k^T``.
The number of coefficients above ``RANK_TOL`` is the Slater number
(fermions) or the Schmidt number (bosons, distinguishable).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import spectral
from .errors import SymmetryViolation
from .state import CoefficientMatrix, Symmetry

#: Absolute threshold on unit-norm states separating zero from nonzero coefficients.
RANK_TOL = 1e-9
NEAR_THRESHOLD_BAND = (RANK_TOL / 10, RANK_TOL * 10)


class DecompositionKind(enum.Enum):
    SLATER = "slater"
    SCHMIDT_BOSON = "schmidt-boson"
    SCHMIDT_DISTINGUISHABLE = "schmidt-distinguishable"


@dataclass(frozen=True)
class DecompositionResult:
    """Canonical form of a state.

    ``modes`` holds orthonormal columns. For ``SLATER`` they are paired as
    ``(modes[:, 2i], modes[:, 2i+1])`` for coefficient ``i``; for the Schmidt
    kinds column ``k`` belongs to coefficient ``k``. ``right_modes`` is only
    set for distinguishable particles.
    """

    kind: DecompositionKind
    modes: np.ndarray
    coefficients: np.ndarray
    effective_rank: int
    near_threshold: bool
    right_modes: Optional[np.ndarray] = None

    @property
    def dim(self):
        return self.modes.shape[0]

    @property
    def symmetry(self):
        return {
            DecompositionKind.SLATER: Symmetry.FERMION,
            DecompositionKind.SCHMIDT_BOSON: Symmetry.BOSON,
            DecompositionKind.SCHMIDT_DISTINGUISHABLE: Symmetry.DISTINGUISHABLE,
        }[self.kind]


def _summarize(coefficients):
    coefficients = np.asarray(coefficients, dtype=float)
    lo, hi = NEAR_THRESHOLD_BAND
    rank = int(np.count_nonzero(coefficients > RANK_TOL))
    near = bool(np.any((coefficients >= lo) & (coefficients <= hi)))
    return coefficients, rank, near


def _require(state, symmetry):
    if state.symmetry is not symmetry:
        raise SymmetryViolation(
            f"expected a {symmetry.value} state, got {state.symmetry.value}"
        )


def slater_decompose(state):
    """Slater decomposition of a fermion state.

    Coefficients are ``|a_i| = sqrt(2) * v_i`` for the Youla block values
    ``v_i``, so that ``sum |a_i|^2 = 1`` for a normalized state.
    """
    _require(state, Symmetry.FERMION)
    fac = spectral.youla(state.entries)
    coefficients, rank, near = _summarize(np.sqrt(2.0) * fac.block_values)
    return DecompositionResult(DecompositionKind.SLATER, fac.modes, coefficients, rank, near)


def schmidt_decompose_boson(state):
    _require(state, Symmetry.BOSON)
    fac = spectral.takagi(state.entries)
    coefficients, rank, near = _summarize(fac.values)
    return DecompositionResult(
        DecompositionKind.SCHMIDT_BOSON, fac.modes, coefficients, rank, near
    )


def schmidt_decompose_general(state):
    """SVD Schmidt decomposition, valid for any state.

    The symmetry tag is ignored, which gives the distinguishable-particle
    view of fermion and boson states as well.
    """
    U, s, Vh = spectral.svd(state.entries)
    coefficients, rank, near = _summarize(s)
    return DecompositionResult(
        DecompositionKind.SCHMIDT_DISTINGUISHABLE, U, coefficients, rank, near,
        right_modes=Vh.T,
    )


def decompose(state):
    """Dispatch on the declared symmetry of ``state``."""
    if state.symmetry is Symmetry.FERMION:
        return slater_decompose(state)
    if state.symmetry is Symmetry.BOSON:
        return schmidt_decompose_boson(state)
    return schmidt_decompose_general(state)


def reconstruct_matrix(result):
    U, c = result.modes, result.coefficients
    if result.kind is DecompositionKind.SLATER:
        return U @ spectral.youla_block(c / np.sqrt(2.0), result.dim) @ U.T
    if result.kind is DecompositionKind.SCHMIDT_BOSON:
        return (U * c) @ U.T
    return (U * c) @ result.right_modes.T


def reconstruct(result):
    """Rebuild the state from its canonical form."""
    return CoefficientMatrix(reconstruct_matrix(result), result.symmetry)


def reconstruction_residual(state, result):
    return float(np.linalg.norm(reconstruct_matrix(result) - state.entries))
