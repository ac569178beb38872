"""Exception types shared across the library.

Truncation is never an error silently converted to zero: operations that
cannot be concluded at the current grading cutoff raise TruncatedError
(or report "inconclusive" in check reports), which is distinct from both
success and failure.
"""


class StructureError(ValueError):
    """Shapes, labels, or invariants of inputs are malformed."""


class ContractError(ValueError):
    """A documented precondition of an operation was violated."""


class TruncatedError(LookupError):
    """The requested data lies outside the grading cutoff; inconclusive."""


class NormalizationError(ArithmeticError):
    """A normalization constant vanished or a normalization check failed."""


class HypothesisViolation(ValueError):
    """Input data does not satisfy the reconstruction hypotheses."""


class UniquenessViolation(ValueError):
    """A solver instance was underdetermined; input data is inconsistent."""


class FormatError(ValueError):
    """A serialized artifact does not conform to the file schema."""
