"""Entanglement criteria for pure states of two identical particles."""

from .decomposition import (
    DecompositionKind,
    DecompositionResult,
    decompose,
    reconstruct,
    schmidt_decompose_boson,
    schmidt_decompose_general,
    slater_decompose,
)
from .entanglement import (
    Classification,
    ReducedDensity,
    Verdict,
    WitnessReport,
    classify,
    reduced_density,
    von_neumann_entropy,
    witness_expectation,
    witness_search,
)
from .errors import (
    ClassificationConflict,
    ConvergenceFailure,
    DimensionMismatch,
    IdentEntError,
    NonUnitVector,
    NotAntisymmetric,
    NotHermitian,
    NotSymmetric,
    ParallelVectors,
    ParseError,
    SymmetryViolation,
    ZeroState,
)
from .spectral import TakagiFactorization, YoulaFactorization, hermitian_eig, svd, takagi, youla
from .state import (
    CoefficientMatrix,
    Symmetry,
    antisymmetrize_product,
    basis_vector,
    from_coefficients,
    inner_product,
    load_state,
    save_state,
    schmidt_form,
    slater_form,
    symmetrize_product,
)

__version__ = "0.1.0"
