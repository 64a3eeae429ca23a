"""Dense spectral kernels: Hermitian eigensolver, SVD, Takagi and Youla forms.

``takagi`` factorizes a complex symmetric matrix as ``C = U diag(b) U^T``;
``youla`` brings a complex antisymmetric matrix to ``C = U J U^T`` with ``J``
block diagonal in 2 x 2 blocks ``[[0, v], [-v, 0]]``. Both return unitary
``U`` and nonnegative values sorted in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, NotAntisymmetric, NotHermitian, NotSymmetric
from .state import SYMMETRY_TOL

# Takagi modes whose value falls below this fraction of the largest value are
# replaced by an orthonormal completion (their phase is numerically undefined).
_NULL_RTOL = 1e-13
_PHASE_ATOL = 1e-8


@dataclass(frozen=True)
class TakagiFactorization:
    modes: np.ndarray
    values: np.ndarray

    def reconstruct(self):
        return (self.modes * self.values) @ self.modes.T


@dataclass(frozen=True)
class YoulaFactorization:
    modes: np.ndarray
    block_values: np.ndarray

    @property
    def dim(self):
        return self.modes.shape[0]

    def canonical_block(self):
        """The block-diagonal ``J`` with ``C = U J U^T``."""
        return youla_block(self.block_values, self.dim)

    def reconstruct(self):
        return self.modes @ self.canonical_block() @ self.modes.T


def youla_block(block_values, dim):
    J = np.zeros((dim, dim), dtype=complex)
    for i, v in enumerate(block_values):
        J[2 * i, 2 * i + 1] = v
        J[2 * i + 1, 2 * i] = -v
    return J


def _rel_residual(a, b):
    scale = np.linalg.norm(a)
    return np.linalg.norm(a - b) / scale if scale > 0 else 0.0


def _square(matrix, name):
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"{name} must be square, got shape {matrix.shape}")
    return matrix


def hermitian_eig(H):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvectors as columns.
    """
    H = _square(H, "H")
    if _rel_residual(H, H.conj().T) > SYMMETRY_TOL:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        w, v = np.linalg.eigh((H + H.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def svd(M):
    """``M = U diag(s) Vh`` with ``s`` nonnegative and descending."""
    M = np.asarray(M, dtype=complex)
    try:
        return np.linalg.svd(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def _first_significant(column):
    k = np.flatnonzero(np.abs(column) > _PHASE_ATOL)
    return column[k[0]] if k.size else column[np.argmax(np.abs(column))]


def _orthonormal_completion(U, dim):
    """Orthonormal basis of the complement of ``range(U)`` in C^dim."""
    if U.shape[1] == 0:
        return np.eye(dim, dtype=complex)
    return scipy.linalg.null_space(U.conj().T)


def takagi(C):
    """Takagi factorization of a complex symmetric matrix.

    Uses the real symmetric embedding ``[[Re C, Im C], [Im C, -Re C]]``,
    whose spectrum is ``{+b_k, -b_k}``: an eigenvector ``(x, y)`` for
    ``+b_k`` yields the Takagi vector ``u = x + i y`` with ``C conj(u) = b_k u``.
    Degenerate values need no special treatment because any real orthonormal
    basis of the ``+b`` eigenspace maps to complex-orthonormal Takagi vectors.

    The sign of each mode is fixed so that its first significant component
    has positive real part; modes with zero value get that component real
    positive.
    """
    C = _square(C, "C")
    d = C.shape[0]
    if _rel_residual(C, C.T) > SYMMETRY_TOL:
        raise NotSymmetric("matrix is not complex symmetric within tolerance")
    C = (C + C.T) / 2
    A, B = C.real, C.imag
    embed = np.block([[A, B], [B, -A]])
    try:
        w, v = np.linalg.eigh(embed)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    w, v = w[::-1][:d], v[:, ::-1][:, :d]
    values = np.clip(w, 0.0, None)
    modes = v[:d] + 1j * v[d:]

    cutoff = _NULL_RTOL * values[0] if values[0] > 0 else np.inf
    live = values > cutoff
    kept = modes[:, live]
    if kept.shape[1]:
        # polar factor removes the small non-orthogonality of tiny-value modes
        W, _, Zh = np.linalg.svd(kept, full_matrices=False)
        kept = W @ Zh
    filler = _orthonormal_completion(kept, d)
    modes = np.hstack([kept, filler])

    for k in range(d):
        z = _first_significant(modes[:, k])
        if live[k]:
            if z.real < 0 or (z.real == 0 and z.imag < 0):
                modes[:, k] = -modes[:, k]
        elif z != 0:
            modes[:, k] *= np.conj(z) / abs(z)
    return TakagiFactorization(modes, values)


def youla(C):
    """Youla canonical form of a complex antisymmetric matrix.

    Deflates one 2 x 2 block at a time: for the top left singular vector
    ``q`` of the restricted matrix ``R``, the vector ``p = R conj(q)`` is
    orthogonal to ``q`` and ``R`` contains ``v (p q^T - q p^T)``. The pair
    phase is fixed so ``v >= 0`` and the first significant entry of ``p`` is
    real positive. For odd dimension the last mode spans the kernel.
    """
    C = _square(C, "C")
    d = C.shape[0]
    if _rel_residual(C, -C.T) > SYMMETRY_TOL:
        raise NotAntisymmetric("matrix is not complex antisymmetric within tolerance")
    C = (C - C.T) / 2
    basis = np.eye(d, dtype=complex)
    modes = []
    values = []
    for _ in range(d // 2):
        R = basis.conj().T @ C @ basis.conj()
        R = (R - R.T) / 2
        m = R.shape[0]
        U, s, _ = svd(R)
        q = U[:, 0]
        p = R @ q.conj()
        p -= q * np.vdot(q, p)
        norm = np.linalg.norm(p)
        if s[0] == 0.0 or norm <= 1e-300:
            p = _orthonormal_completion(q[:, None], m)[:, 0]
        else:
            p /= norm
        v = np.vdot(p, R @ q.conj())
        if v != 0:
            p *= v / abs(v)
        z = _first_significant(p)
        if z != 0:
            phase = np.conj(z) / abs(z)
            p, q = p * phase, q / phase
        values.append(abs(v))
        modes.extend([basis @ p, basis @ q])
        rest = _orthonormal_completion(np.column_stack([p, q]), m)
        basis = basis @ rest
    if d % 2:
        last = basis[:, 0]
        z = _first_significant(last)
        modes.append(last * (np.conj(z) / abs(z)) if z != 0 else last)

    values = np.array(values, dtype=float)
    order = np.argsort(-values, kind="stable")
    cols = []
    for i in order:
        cols.extend([modes[2 * i], modes[2 * i + 1]])
    if d % 2:
        cols.append(modes[-1])
    return YoulaFactorization(np.column_stack(cols), values[order])
