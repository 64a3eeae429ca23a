"""Independent reference computations, seeded generators and property sweeps.

Everything here works from the d**2 ket ``psi`` (index ``i * d + j``) with
plain numpy, deliberately avoiding the fast paths it is meant to check.

Random streams
--------------
All generators draw from ``numpy.random.Generator(numpy.random.PCG64(seed))``
via ``standard_normal``. A complex array of shape ``s`` consumes
``2 * prod(s)`` normals ``z`` and is ``z[0::2] + 1j * z[1::2]`` reshaped
row-major to ``s``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import spectral
from .decomposition import RANK_TOL, decompose, reconstruction_residual
from .entanglement import (
    ENTROPY_TOL,
    Verdict,
    classify,
    witness_search,
)
from .errors import ClassificationConflict, IdentEntError
from .state import (
    Symmetry,
    antisymmetrize_product,
    from_coefficients,
    normalize_vector,
    slater_form,
    state_from_dict,
    symmetrize_product,
)


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def complex_normal(rng, shape):
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    z = rng.standard_normal(2 * int(np.prod(shape)))
    return (z[0::2] + 1j * z[1::2]).reshape(shape)


def random_vector(rng, dim):
    return normalize_vector(complex_normal(rng, dim))


def random_unitary(rng, dim):
    """Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phases removed."""
    Z = complex_normal(rng, (dim, dim))
    Q, R = np.linalg.qr(Z)
    diag = np.diag(R)
    return Q * (diag / np.abs(diag))


def random_state(symmetry, dim, seed):
    """Seeded random state.

    Draws a d x d complex Gaussian ``M`` (see module docstring), takes
    ``(M - M^T)/2`` for fermions or ``(M + M^T)/2`` for bosons, and normalizes.
    """
    symmetry = Symmetry.parse(symmetry)
    M = complex_normal(make_rng(seed), (dim, dim))
    if symmetry is Symmetry.FERMION:
        M = (M - M.T) / 2
    elif symmetry is Symmetry.BOSON:
        M = (M + M.T) / 2
    return from_coefficients(M, symmetry)


def random_slater_coefficients(rng, dim, min_coeff=0.05, max_tries=1000):
    """Nonnegative Slater coefficients with at least two above ``min_coeff``.

    The number of nonzero entries is uniform in ``[2, dim // 2]``; the
    magnitudes are rejection-sampled until the normalized minimum clears
    ``min_coeff``.
    """
    pairs = dim // 2
    if pairs < 2:
        raise ValueError("need dim >= 4 for two Slater terms")
    k = int(rng.integers(2, pairs + 1))
    for _ in range(max_tries):
        a = rng.uniform(0.0, 1.0, size=k)
        a /= np.linalg.norm(a)
        if a.min() >= min_coeff:
            out = np.zeros(pairs)
            out[:k] = np.sort(a)[::-1]
            return out
    raise RuntimeError("could not sample gapped coefficients")


# --------------------------------------------------------------------------- #
# Reference computations                                                      #
# --------------------------------------------------------------------------- #

def reduced_density_direct(state, which=1):
    """Partial trace of ``|psi><psi|`` built as a d**2 x d**2 operator."""
    d = state.dim
    psi = state.vector
    full = np.outer(psi, psi.conj()).reshape(d, d, d, d)
    if which == 1:
        return np.einsum("ijkj->ik", full)
    if which == 2:
        return np.einsum("ijil->jl", full)
    raise ValueError(f"which must be 1 or 2, got {which!r}")


def entropy_direct(state, which=1):
    lam = np.linalg.eigvalsh(reduced_density_direct(state, which))
    total = 0.0
    for p in lam:
        if p > 0:
            total -= p * np.log(p) / np.log(2.0)
    return max(0.0, float(total))


def schmidt_rank_direct(state):
    """Number of singular values of the reshaped ket above the rank threshold."""
    d = state.dim
    s = np.linalg.svd(state.vector.reshape(d, d), compute_uv=False)
    return int(np.count_nonzero(s > RANK_TOL))


def expected_rank_direct(state):
    """Oracle for the effective rank reported by the decomposition.

    A Slater term contributes two equal singular values, so the fermion
    Slater number is half the SVD rank.
    """
    r = schmidt_rank_direct(state)
    return r // 2 if state.symmetry is Symmetry.FERMION else r


def witness_direct(state, v):
    """Sum of the three projector terms on the full two-particle space."""
    d = state.dim
    v = np.asarray(v, dtype=complex)
    P = np.outer(v, v.conj())
    Q = np.eye(d) - P
    E = np.kron(P, Q) + np.kron(Q, P) + np.kron(P, P)
    psi = state.vector
    return float(np.vdot(psi, E @ psi).real)


@dataclass(frozen=True)
class OverlapCheck:
    values: np.ndarray
    overlap: float
    equal_values: bool
    orthogonal: bool

    @property
    def consistent(self):
        return self.equal_values == self.orthogonal


def overlap_theorem_check(phi, chi, tol=1e-10):
    """Compare ``b1 == b2`` for the symmetrized product with ``<phi|chi> == 0``."""
    phi, chi = normalize_vector(phi), normalize_vector(chi)
    overlap = abs(np.vdot(phi, chi))
    values = spectral.takagi(symmetrize_product(phi, chi).entries).values
    equal = bool(abs(values[0] - values[1]) <= tol and values[1] > RANK_TOL)
    return OverlapCheck(values, float(overlap), equal, bool(overlap <= tol))


def bloch_vectors(theta, phi):
    """Unit vectors ``(cos(t/2), e^{i p} sin(t/2))`` on a polar x azimuth grid."""
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)], axis=-1)


def witness_grid_d2(state, resolution=(720, 1440), return_argmax=False):
    """Exhaustive maximum of the witness over a Bloch-sphere grid (d = 2).

    Polar angles include both poles; azimuths are ``2 pi k / n``. Each grid
    point is evaluated through the three projector terms.
    """
    if state.dim != 2:
        raise ValueError("the Bloch grid oracle needs dim = 2")
    n_theta, n_phi = resolution
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    C = state.entries
    best, arg = -np.inf, None
    for rows in np.array_split(np.arange(n_theta), max(1, n_theta // 60)):
        v = bloch_vectors(theta[rows], phi).reshape(-1, 2)
        P = np.einsum("ni,nj->nij", v, v.conj())
        Q = np.eye(2) - P

        def term(A, B):
            # <psi| A (x) B |psi> = sum conj(C_ik) A_ij B_kl C_jl
            return np.einsum("ik,nij,nkl,jl->n", C.conj(), A, B, C).real

        vals = term(P, Q) + term(Q, P) + term(P, P)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, arg = float(vals[k]), v[k]
    return (best, arg) if return_argmax else best


# --------------------------------------------------------------------------- #
# Sweeps                                                                      #
# --------------------------------------------------------------------------- #

#: family -> (symmetry, verdict required by the construction or None)
FAMILIES = {
    "random-fermion": (Symmetry.FERMION, None),
    "random-boson": (Symmetry.BOSON, None),
    "random-distinguishable": (Symmetry.DISTINGUISHABLE, None),
    "antisym-product": (Symmetry.FERMION, Verdict.NON_ENTANGLED_SLATER_ONE),
    "slater-form": (Symmetry.FERMION, Verdict.ENTANGLED),
    "sym-orthogonal": (Symmetry.BOSON, Verdict.NON_ENTANGLED_SYMMETRIZED_ORTHOGONAL),
    "sym-nonorthogonal": (Symmetry.BOSON, Verdict.ENTANGLED),
    "same-product": (Symmetry.BOSON, Verdict.NON_ENTANGLED_PRODUCT),
    "factorized": (Symmetry.DISTINGUISHABLE, Verdict.NON_ENTANGLED_FACTORIZED),
}

DEFAULT_CONFIG = {
    "dims": [2, 3, 4, 5, 6],
    "states_per_family": 20,
    "families": list(FAMILIES),
    "seed": 0,
    "witness": True,
    "witness_restarts": 2,
    "inject": [],
}


def family_state(family, dim, seed):
    """Seeded member of a construction family, or None if the family needs a larger dim."""
    symmetry, _ = FAMILIES[family]
    if family.startswith("random-"):
        return random_state(symmetry, dim, seed)
    rng = make_rng(seed)
    if family == "slater-form":
        if dim < 4:
            return None
        a = random_slater_coefficients(rng, dim)
        return slater_form(a, random_unitary(rng, dim))
    phi = random_vector(rng, dim)
    if family == "same-product":
        return symmetrize_product(phi, phi)
    if family == "factorized":
        chi = random_vector(rng, dim)
        return from_coefficients(np.outer(phi, chi), Symmetry.DISTINGUISHABLE)
    chi = random_vector(rng, dim)
    if family == "sym-orthogonal":
        chi = normalize_vector(chi - phi * np.vdot(phi, chi))
        return symmetrize_product(phi, chi)
    if family == "sym-nonorthogonal":
        # keep the overlap away from 0 and 1 so the state is gapped
        while not 0.05 <= abs(np.vdot(phi, chi)) <= 0.95:
            chi = random_vector(rng, dim)
        return symmetrize_product(phi, chi)
    if family == "antisym-product":
        return antisymmetrize_product(phi, chi)
    raise KeyError(family)


def check_state(state, family=None, seed=None, witness=True, witness_restarts=2,
                entropy_tol=1e-10, residual_tol=1e-10):
    """Classify ``state`` and compare every fast-path quantity with its oracle.

    Returns a sweep record; ``record["failures"]`` lists violated invariants.
    """
    failures = []
    record = {
        "seed": seed,
        "family": family,
        "symmetry": state.symmetry.value,
        "dim": state.dim,
        "verdict": None,
        "rank": None,
        "entropy": None,
        "witness": None,
        "residual": None,
    }
    result = decompose(state)
    residual = reconstruction_residual(state, result)
    record["residual"] = residual
    record["rank"] = result.effective_rank
    if residual > residual_tol:
        failures.append(f"reconstruction residual {residual:.3e}")
    if result.effective_rank != expected_rank_direct(state):
        failures.append(
            f"rank {result.effective_rank} != oracle {expected_rank_direct(state)}"
        )
    try:
        c = classify(state, witness=witness, seed=0 if seed is None else seed,
                     restarts=witness_restarts)
    except ClassificationConflict as exc:
        record["verdict"] = "conflict"
        failures.append(f"classification conflict: {exc}")
        record["failures"] = failures
        return record
    record["verdict"] = c.verdict.value
    record["entropy"] = c.entropy
    S_ref = entropy_direct(state)
    if abs(c.entropy - S_ref) > entropy_tol:
        failures.append(f"entropy {c.entropy!r} != oracle {S_ref!r}")
    if family is not None:
        expected = FAMILIES[family][1]
        if expected is not None and c.verdict is not expected:
            failures.append(f"verdict {c.verdict.value} != expected {expected.value}")
    if c.witness is not None:
        record["witness"] = c.witness.expectation
        if not c.entangled and c.witness.expectation < 1 - 1e-8:
            failures.append(f"non-entangled but witness {c.witness.expectation!r}")
    # theorem-level consistency between entropy and rank
    S = c.entropy
    if state.symmetry is Symmetry.FERMION:
        if (c.rank_count == 1) != (abs(S - 1) <= ENTROPY_TOL):
            failures.append("Slater number / entropy mismatch")
    elif state.symmetry is Symmetry.BOSON and c.rank_count >= 3:
        if reduced_density_rank(state) < 3:
            failures.append("Schmidt >= 3 but reduced density rank < 3")
    record["failures"] = failures
    return record


def reduced_density_rank(state, tol=1e-12):
    lam = np.linalg.eigvalsh(reduced_density_direct(state))
    return int(np.count_nonzero(lam > tol))


def sweep_states(config):
    """Yield ``(family, dim, seed, state)`` for a sweep configuration."""
    cfg = {**DEFAULT_CONFIG, **config}
    unknown = set(cfg["families"]) - set(FAMILIES)
    if unknown:
        raise ValueError(f"unknown families: {sorted(unknown)}")
    seed = int(cfg["seed"])
    for family, dim in itertools.product(cfg["families"], cfg["dims"]):
        if int(dim) < 2:
            raise ValueError(f"dims must be >= 2, got {dim}")
        for _ in range(int(cfg["states_per_family"])):
            state = family_state(family, int(dim), seed)
            if state is not None:
                yield family, int(dim), seed, state
            seed += 1
    for item in cfg["inject"]:
        family = item.get("family")
        if family is not None and family not in FAMILIES:
            raise ValueError(f"unknown family {family!r} in inject")
        yield family, None, item.get("seed"), state_from_dict(item["state"])


def run_sweep(config):
    """Run a sweep, yielding one record per state."""
    cfg = {**DEFAULT_CONFIG, **config}
    for family, _, seed, state in sweep_states(cfg):
        try:
            yield check_state(state, family, seed, witness=bool(cfg["witness"]),
                              witness_restarts=int(cfg["witness_restarts"]))
        except IdentEntError as exc:
            yield {"seed": seed, "family": family, "symmetry": state.symmetry.value,
                   "dim": state.dim, "verdict": None, "rank": None, "entropy": None,
                   "witness": None, "residual": None, "failures": [str(exc)]}

