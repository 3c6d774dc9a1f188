"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can report
it and choose an exit status without string matching.
"""


class TenfactError(Exception):
    code = "ERROR"
    exit_code = 2

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class InputError(TenfactError):
    """Malformed or out-of-range input."""
    code = "INPUT"


class DimensionMismatch(InputError, ValueError):
    code = "DIMENSION_MISMATCH"


class ValidationFailed(InputError):
    """Raised by operations whose precondition is valid category data."""
    code = "VIOLATION"


class AmbiguousDual(TenfactError):
    code = "AMBIGUOUS"


class InconsistentDual(TenfactError):
    code = "INCONSISTENT"


class SingularCartan(TenfactError):
    code = "SINGULAR"


class NotProjectiveClass(TenfactError):
    """The unique rational solution is not a nonnegative integer vector.

    The solution is still available as ``mults``.
    """
    code = "NOT_PROJECTIVE_CLASS"

    def __init__(self, message, mults):
        super().__init__(message)
        self.mults = mults


class NoConvergence(TenfactError):
    code = "NO_CONVERGENCE"


class Nonpositive(TenfactError):
    code = "NONPOSITIVE"


class TargetMismatch(InputError):
    code = "TARGET_MISMATCH"


class InvalidEmbedding(InputError):
    code = "INVALID_EMBEDDING"


class Unsupported(TenfactError):
    code = "UNSUPPORTED"


class AutoUnsupported(Unsupported):
    code = "AUTO_UNSUPPORTED"


class NotCocycle(InputError):
    code = "NOT_COCYCLE"


class NotSubgroup(InputError):
    code = "NOT_SUBGROUP"


class NotExactFactorization(InputError):
    code = "NOT_EXACT_FACTORIZATION"


class ResourceLimit(TenfactError):
    code = "RESOURCE_LIMIT"
    exit_code = 3


class OrderLimit(ResourceLimit):
    code = "ORDER_LIMIT"


class SizeLimit(ResourceLimit):
    code = "SIZE_LIMIT"


class IndexOutOfRange(InputError, IndexError):
    code = "INDEX_OUT_OF_RANGE"
