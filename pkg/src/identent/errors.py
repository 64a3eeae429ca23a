"""Exception hierarchy shared by every module of the package."""


class IdentEntError(Exception):
    """Base class for all errors raised by :mod:`identent`."""


class ZeroState(IdentEntError, ValueError):
    pass


class SymmetryViolation(IdentEntError, ValueError):
    pass


class DimensionMismatch(IdentEntError, ValueError):
    pass


class ParallelVectors(IdentEntError, ValueError):
    """Antisymmetrization of (nearly) parallel vectors vanishes."""


class NonUnitVector(IdentEntError, ValueError):
    pass


class NotHermitian(IdentEntError, ValueError):
    pass


class NotSymmetric(IdentEntError, ValueError):
    pass


class NotAntisymmetric(IdentEntError, ValueError):
    pass


class ConvergenceFailure(IdentEntError, RuntimeError):
    pass


class ClassificationConflict(IdentEntError, RuntimeError):
    """The rank-led and entropy-led classification routes disagree."""

    def __init__(self, message, rank_verdict=None, entropy_verdict=None):
        super().__init__(message)
        self.rank_verdict = rank_verdict
        self.entropy_verdict = entropy_verdict


class ParseError(IdentEntError, ValueError):
    """Malformed state file; ``location`` names the offending line or field."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
