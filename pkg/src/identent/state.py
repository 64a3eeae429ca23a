"""Two-particle pure states stored as coefficient matrices.

A state ``|psi> = sum_ij C[i, j] |i> (x) |j>`` is held as the d x d complex
matrix ``C``. Fermion states are antisymmetric (``C = -C.T``), boson states
symmetric (``C = C.T``); distinguishable-particle states carry no constraint.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    ParallelVectors,
    ParseError,
    SymmetryViolation,
    ZeroState,
)

#: Relative Frobenius tolerance for the (anti)symmetry check.
SYMMETRY_TOL = 1e-10
#: Below this norm of the antisymmetrized product the inputs count as parallel.
PARALLEL_TOL = 1e-12


class Symmetry(enum.Enum):
    FERMION = "fermion"
    BOSON = "boson"
    DISTINGUISHABLE = "distinguishable"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown symmetry {value!r}; expected one of "
                + ", ".join(s.value for s in cls)
            ) from None


def symmetry_residual(matrix, symmetry):
    """Relative Frobenius residual ``||C -+ C.T|| / ||C||`` for ``symmetry``."""
    matrix = np.asarray(matrix)
    norm = np.linalg.norm(matrix)
    if symmetry is Symmetry.FERMION:
        return np.linalg.norm(matrix + matrix.T) / norm
    if symmetry is Symmetry.BOSON:
        return np.linalg.norm(matrix - matrix.T) / norm
    return 0.0


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Normalized coefficient matrix of a two-particle state.

    Build instances through :func:`from_coefficients` (or the product
    constructors); the raw constructor performs no validation.
    """

    entries: np.ndarray
    symmetry: Symmetry

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def vector(self):
        """The state as a length d**2 ket, index ``i * d + j`` for ``|i>|j>``."""
        return self.entries.reshape(-1)

    def __repr__(self):
        return f"CoefficientMatrix(dim={self.dim}, symmetry={self.symmetry.value})"


def from_coefficients(raw, symmetry=Symmetry.DISTINGUISHABLE):
    """Validate and normalize a raw coefficient matrix.

    The declared symmetry is checked against ``SYMMETRY_TOL`` and then
    imposed exactly by projecting onto the (anti)symmetric part, so that
    downstream factorizations see an exactly structured matrix.
    """
    symmetry = Symmetry.parse(symmetry)
    matrix = np.array(raw, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"coefficients must be square, got shape {matrix.shape}")
    if matrix.shape[0] < 2:
        raise DimensionMismatch("single-particle dimension must be at least 2")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("coefficients must be finite")
    norm = np.linalg.norm(matrix)
    if norm == 0.0:
        raise ZeroState("all coefficients are zero")
    residual = symmetry_residual(matrix, symmetry)
    if residual > SYMMETRY_TOL:
        raise SymmetryViolation(
            f"declared {symmetry.value} but relative residual is {residual:.3e}"
        )
    if symmetry is Symmetry.FERMION:
        matrix = (matrix - matrix.T) / 2
    elif symmetry is Symmetry.BOSON:
        matrix = (matrix + matrix.T) / 2
    return CoefficientMatrix(matrix / np.linalg.norm(matrix), symmetry)


def normalize_vector(v):
    v = np.array(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ZeroState("zero single-particle vector")
    return v / norm


def basis_vector(dim, index):
    """Computational basis vector ``e_index`` (0-based)."""
    if not 0 <= index < dim:
        raise DimensionMismatch(f"basis index {index} out of range for dim {dim}")
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e


def _check_pair(phi, chi):
    phi, chi = normalize_vector(phi), normalize_vector(chi)
    if phi.shape != chi.shape:
        raise DimensionMismatch(f"vector dimensions differ: {phi.size} vs {chi.size}")
    if phi.size < 2:
        raise DimensionMismatch("single-particle dimension must be at least 2")
    return phi, chi


def antisymmetrize_product(phi, chi):
    """Fermion state proportional to ``(phi chi^T - chi phi^T) / 2``.

    Raises :class:`ParallelVectors` when the two (normalized) inputs are
    parallel, where the antisymmetrized product vanishes.
    """
    phi, chi = _check_pair(phi, chi)
    # built from one outer product so that C = -C^T holds bitwise
    outer = np.outer(phi, chi)
    matrix = (outer - outer.T) / 2
    norm = np.linalg.norm(matrix)
    if norm <= PARALLEL_TOL:
        raise ParallelVectors("antisymmetrized product vanishes for parallel vectors")
    return CoefficientMatrix(matrix / norm, Symmetry.FERMION)


def symmetrize_product(phi, chi):
    """Boson state proportional to ``(phi chi^T + chi phi^T) / 2``."""
    phi, chi = _check_pair(phi, chi)
    outer = np.outer(phi, chi)
    matrix = (outer + outer.T) / 2
    norm = np.linalg.norm(matrix)
    if norm == 0.0:
        raise ZeroState("symmetrized product vanishes")
    return CoefficientMatrix(matrix / norm, Symmetry.BOSON)


def _mode_matrix(modes, dim):
    if modes is None:
        return np.eye(dim, dtype=complex)
    U = np.asarray(modes, dtype=complex)
    if U.shape != (dim, dim):
        raise DimensionMismatch(f"modes must be {dim} x {dim}, got {U.shape}")
    return U


def slater_form(coefficients, modes=None, dim=None):
    """Fermion state ``sum_i a_i (u_{2i-1} u_{2i}^T - u_{2i} u_{2i-1}^T) / sqrt 2``.

    ``modes`` columns are the paired orbitals (identity by default); the
    result is renormalized.
    """
    a = np.asarray(coefficients, dtype=complex).reshape(-1)
    dim = 2 * a.size if dim is None and modes is None else dim
    U = _mode_matrix(modes, dim if dim is not None else np.shape(modes)[0])
    if 2 * a.size > U.shape[0]:
        raise DimensionMismatch(f"{a.size} Slater terms need dim >= {2 * a.size}")
    C = np.zeros((U.shape[0],) * 2, dtype=complex)
    for i, ai in enumerate(a):
        p, q = U[:, 2 * i], U[:, 2 * i + 1]
        C += ai / np.sqrt(2) * (np.outer(p, q) - np.outer(q, p))
    return from_coefficients(C, Symmetry.FERMION)


def schmidt_form(coefficients, modes=None, dim=None):
    """Boson state ``sum_i b_i u_i u_i^T``, renormalized."""
    b = np.asarray(coefficients, dtype=complex).reshape(-1)
    dim = b.size if dim is None and modes is None else dim
    U = _mode_matrix(modes, dim if dim is not None else np.shape(modes)[0])
    if b.size > U.shape[0]:
        raise DimensionMismatch(f"{b.size} Schmidt terms need dim >= {b.size}")
    C = (U[:, : b.size] * b) @ U[:, : b.size].T
    return from_coefficients(C, Symmetry.BOSON)


def inner_product(a, b):
    """``<a|b> = sum_ij conj(A_ij) B_ij``."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.entries, b.entries))


# --------------------------------------------------------------------------- #
# JSON interchange                                                            #
# --------------------------------------------------------------------------- #

def format_float(x):
    """Render a float with 17 significant digits (lossless for binary64)."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj, indent=None, _level=0):
    """JSON encoder that writes every float with 17 significant digits.

    Accepts the subset of Python values produced by this package: dicts with
    string keys, lists/tuples, str, bool, None, int, float, numpy scalars.
    """
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            pad + json.dumps(str(k)) + ": " + dumps(v, indent, _level + 1)
            for k, v in obj.items()
        ]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(obj.item() if isinstance(obj, np.bool_) else obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def state_to_dict(state):
    return {
        "dim": state.dim,
        "symmetry": state.symmetry.value,
        "coefficients": [
            [[float(z.real), float(z.imag)] for z in row] for row in state.entries
        ],
    }


def state_to_json(state):
    # one matrix row per line keeps files diffable
    rows = [dumps(row) for row in state_to_dict(state)["coefficients"]]
    return (
        "{\n"
        f'  "dim": {state.dim},\n'
        f'  "symmetry": {json.dumps(state.symmetry.value)},\n'
        '  "coefficients": [\n    '
        + ",\n    ".join(rows)
        + "\n  ]\n}\n"
    )


def _number(value, location):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", location)
    return float(value)


def state_from_dict(data):
    """Build a state from the decoded JSON object, raising :class:`ParseError`."""
    if not isinstance(data, dict):
        raise ParseError("top-level value must be an object")
    for key in ("dim", "symmetry", "coefficients"):
        if key not in data:
            raise ParseError("missing field", key)
    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
        raise ParseError(f"expected an integer >= 2, got {dim!r}", "dim")
    try:
        symmetry = Symmetry.parse(data["symmetry"])
    except ValueError as exc:
        raise ParseError(str(exc), "symmetry") from None
    rows = data["coefficients"]
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"expected {dim} rows", "coefficients")
    matrix = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"expected {dim} entries", f"coefficients[{i}]")
        for j, pair in enumerate(row):
            loc = f"coefficients[{i}][{j}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError("expected a [re, im] pair", loc)
            matrix[i, j] = complex(_number(pair[0], loc), _number(pair[1], loc))
    try:
        return from_coefficients(matrix, symmetry)
    except (ZeroState, DimensionMismatch) as exc:
        raise ParseError(str(exc), "coefficients") from None


def state_from_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return state_from_dict(data)


def save_state(state, path):
    Path(path).write_text(state_to_json(state))


def load_state(path):
    """Read a state file; SymmetryViolation propagates unchanged."""
    return state_from_json(Path(path).read_text())
