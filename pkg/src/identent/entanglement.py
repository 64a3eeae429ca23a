"""Reduced density operators, entropy, classification and the property witness.

The witness for a single-particle unit vector ``v`` (projector ``P = v v^H``)
is the probability of finding at least one particle in ``v``::

    <psi| P(x)(I-P) + (I-P)(x)P + P(x)P |psi> = 1 - ||(I-P)(x)(I-P) psi||^2

computed here as ``1 - ||Q C Q^T||_F^2`` with ``Q = I - P``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import spectral
from .decomposition import DecompositionResult, decompose
from .errors import ClassificationConflict, NonUnitVector
from .state import CoefficientMatrix, Symmetry

#: Tolerance for comparing entropies against 0 and 1 bit.
ENTROPY_TOL = 1e-8
UNIT_TOL = 1e-10

DEFAULT_RESTARTS = 8
DEFAULT_MAX_ITERS = 500
_ASCENT_TOL = 1e-12


class Verdict(enum.Enum):
    NON_ENTANGLED_PRODUCT = "non-entangled-product"
    NON_ENTANGLED_SYMMETRIZED_ORTHOGONAL = "non-entangled-symmetrized-orthogonal"
    NON_ENTANGLED_SLATER_ONE = "non-entangled-slater-one"
    NON_ENTANGLED_FACTORIZED = "non-entangled-factorized"
    ENTANGLED = "entangled"

    @property
    def entangled(self):
        return self is Verdict.ENTANGLED


@dataclass(frozen=True)
class ReducedDensity:
    matrix: np.ndarray
    eigenvalues: np.ndarray

    @property
    def rank(self):
        return int(np.count_nonzero(self.eigenvalues > 1e-12))


@dataclass(frozen=True)
class WitnessReport:
    vector: np.ndarray
    expectation: float
    iterations: int
    restarts_used: int

    def to_dict(self):
        return {
            "vector": [[float(z.real), float(z.imag)] for z in self.vector],
            "expectation": self.expectation,
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
        }


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    symmetry: Symmetry
    rank_count: int
    entropy: float
    decomposition: DecompositionResult
    witness: Optional[WitnessReport] = None

    @property
    def entangled(self):
        return self.verdict.entangled

    @property
    def witness_value(self):
        return None if self.witness is None else self.witness.expectation

    @property
    def near_threshold(self):
        return self.decomposition.near_threshold


def reduced_density(state, which=1):
    """One-particle reduced density operator.

    ``rho_1 = C C^H`` traces out particle 2; ``rho_2 = C^T conj(C)`` traces
    out particle 1.
    """
    C = state.entries
    if which == 1:
        rho = C @ C.conj().T
    elif which == 2:
        rho = C.T @ C.conj()
    else:
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    rho = (rho + rho.conj().T) / 2
    values, _ = spectral.hermitian_eig(rho)
    return ReducedDensity(rho, values)


def entropy_bits(eigenvalues):
    """``-sum p log2 p`` over a spectrum, with ``0 log 0 = 0``."""
    p = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def von_neumann_entropy(rho):
    """Von Neumann entropy of a :class:`ReducedDensity`, in bits."""
    return entropy_bits(rho.eigenvalues)


def _rank_led(symmetry, rank, S):
    if symmetry is Symmetry.FERMION:
        return Verdict.NON_ENTANGLED_SLATER_ONE if rank == 1 else Verdict.ENTANGLED
    if symmetry is Symmetry.BOSON:
        if rank == 1:
            return Verdict.NON_ENTANGLED_PRODUCT
        if rank == 2 and abs(S - 1.0) <= ENTROPY_TOL:
            return Verdict.NON_ENTANGLED_SYMMETRIZED_ORTHOGONAL
        return Verdict.ENTANGLED
    return Verdict.NON_ENTANGLED_FACTORIZED if rank == 1 else Verdict.ENTANGLED


def _entropy_led(symmetry, rank, S):
    if symmetry is Symmetry.FERMION:
        if abs(S - 1.0) <= ENTROPY_TOL:
            return Verdict.NON_ENTANGLED_SLATER_ONE
        return Verdict.ENTANGLED
    if symmetry is Symmetry.BOSON:
        if S <= ENTROPY_TOL:
            return Verdict.NON_ENTANGLED_PRODUCT
        if abs(S - 1.0) <= ENTROPY_TOL and rank == 2:
            return Verdict.NON_ENTANGLED_SYMMETRIZED_ORTHOGONAL
        return Verdict.ENTANGLED
    return Verdict.NON_ENTANGLED_FACTORIZED if S <= ENTROPY_TOL else Verdict.ENTANGLED


def classify(state, *, witness=False, seed=0, restarts=DEFAULT_RESTARTS,
             max_iters=DEFAULT_MAX_ITERS):
    """Decide whether ``state`` is entangled.

    Both the rank-led rule (Slater/Schmidt number first, entropy as the
    tie-breaker for two-term boson states) and the entropy-led rule are
    evaluated; disagreement raises :class:`ClassificationConflict`. With
    ``witness=True`` a :class:`WitnessReport` is attached as a certificate,
    it never changes the verdict.
    """
    result = decompose(state)
    S = von_neumann_entropy(reduced_density(state, 1))
    rank = result.effective_rank
    by_rank = _rank_led(state.symmetry, rank, S)
    by_entropy = _entropy_led(state.symmetry, rank, S)
    if by_rank is not by_entropy:
        raise ClassificationConflict(
            f"rank {rank} gives {by_rank.value} but entropy {S:.12g} gives "
            f"{by_entropy.value}",
            rank_verdict=by_rank,
            entropy_verdict=by_entropy,
        )
    report = None
    if witness:
        report = witness_search(state, seed=seed, restarts=restarts,
                                max_iters=max_iters, decomposition=result)
    return Classification(by_rank, state.symmetry, rank, S, result, report)


# --------------------------------------------------------------------------- #
# Property witness                                                            #
# --------------------------------------------------------------------------- #

def _unit(v, dim):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != dim:
        raise NonUnitVector(f"vector has dimension {v.size}, state has {dim}")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise NonUnitVector(f"vector norm is {np.linalg.norm(v):.12g}, expected 1")
    return v


def witness_expectation(state, v):
    """``<psi|E_P|psi>`` for ``P = v v^H``; ``v`` must be a unit vector."""
    v = _unit(v, state.dim)
    Q = np.eye(state.dim) - np.outer(v, v.conj())
    value = 1.0 - np.linalg.norm(Q @ state.entries @ Q.T) ** 2
    return float(min(1.0, max(0.0, value)))


class _Objective:
    """``f(v) = v^H A v - |v^H S conj(v)|^2`` with ``A = rho_1 + rho_2``.

    Equal to the witness on the unit sphere; ``S`` is the symmetric part of
    ``C`` since the antisymmetric part drops out of the quadratic form.
    """

    def __init__(self, state):
        C = state.entries
        self.A = C @ C.conj().T + C.T @ C.conj()
        self.S = (C + C.T) / 2

    def value(self, v):
        g = np.vdot(v, self.S @ v.conj())
        return float(np.vdot(v, self.A @ v).real - abs(g) ** 2)

    def linearized(self, v):
        w = self.S @ v.conj()
        return self.A - np.outer(w, w.conj())

    def gradient(self, v):
        g = np.vdot(v, self.S @ v.conj())
        G = 2 * (self.A @ v - 2 * np.conj(g) * (self.S @ v.conj()))
        return G - np.real(np.vdot(v, G)) * v


def _ascend(obj, v, max_iters):
    """Local ascent on the unit sphere from ``v``.

    Each step tries the top eigenvector of the linearized operator and falls
    back to a backtracking Riemannian gradient step when that fails to
    improve. Stops once the gain drops below ``_ASCENT_TOL``.
    """
    f = obj.value(v)
    for it in range(1, max_iters + 1):
        _, vecs = np.linalg.eigh(obj.linearized(v))
        cand = vecs[:, -1]
        fc = obj.value(cand)
        if fc <= f + _ASCENT_TOL:
            G = obj.gradient(v)
            t = 1.0
            fc = -np.inf
            for _ in range(40):
                trial = v + t * G
                trial /= np.linalg.norm(trial)
                ft = obj.value(trial)
                if ft > f:
                    cand, fc = trial, ft
                    break
                t /= 2
        if fc <= f + _ASCENT_TOL:
            if fc > f:
                v, f = cand, fc
            return v, f, it
        v, f = cand, fc
    return v, f, max_iters


def closed_form_candidates(result):
    """Certificate vectors suggested by the canonical form.

    The first mode certifies product, factorized and single-Slater states.
    For a two-term boson state ``b1 u1 u1^T + b2 u2 u2^T`` the factor
    ``sqrt(b1) u1 + i sqrt(b2) u2`` of its symmetrized-product form is added.
    """
    U, c = result.modes, result.coefficients
    candidates = [U[:, 0]]
    if result.symmetry is Symmetry.BOSON and result.effective_rank == 2:
        v = np.sqrt(c[0]) * U[:, 0] + 1j * np.sqrt(c[1]) * U[:, 1]
        candidates.append(v / np.linalg.norm(v))
    return candidates


def witness_search(state, seed=0, restarts=DEFAULT_RESTARTS,
                   max_iters=DEFAULT_MAX_ITERS, decomposition=None):
    """Maximize the witness over single-particle unit vectors.

    Starts from the closed-form candidates and the top eigenvector of
    ``rho_1 + rho_2``, then from ``restarts`` seeded random vectors. The best
    expectation wins, ties going to the earliest start. Random restarts are
    skipped once the expectation reaches 1 to machine precision.
    """
    if decomposition is None:
        decomposition = decompose(state)
    obj = _Objective(state)
    rng = np.random.default_rng(seed)
    starts = list(closed_form_candidates(decomposition))
    _, vecs = np.linalg.eigh(obj.A)
    starts.append(vecs[:, -1])

    best = None
    used = 0

    def run(v0):
        nonlocal best
        v, _, iters = _ascend(obj, v0 / np.linalg.norm(v0), max_iters)
        value = witness_expectation(state, v)
        if best is None or value > best[1]:
            best = (v, value, iters)

    for v0 in starts:
        run(v0)
    for _ in range(restarts):
        if best[1] >= 1.0 - 1e-15:
            break
        z = rng.standard_normal(2 * state.dim)
        run(z[0::2] + 1j * z[1::2])
        used += 1
    v, value, iters = best
    return WitnessReport(v, value, iters, used)
