"""Exception types shared across the package.

Most derive from ValueError so callers that only know numpy conventions can
still catch them generically.
"""


class HypermatrixError(ValueError):
    """Base class for all package-specific errors."""


class ShapeMismatchError(HypermatrixError):
    """Operands have incompatible shapes for the requested operation."""


class OperandShapeError(ShapeMismatchError):
    """A BM-product operand violates the expected shape pattern.

    Carries the offending operand index and axis so callers can report
    precisely which dimension is wrong.
    """

    def __init__(self, message, operand=None, axis=None):
        super().__init__(message)
        self.operand = operand
        self.axis = axis


class DefectiveMatrixError(HypermatrixError):
    """The eigensolver failed to converge or the matrix is numerically defective."""


class LiftError(HypermatrixError):
    """Biorthogonal completion failed; carries the numerical rank found."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class SingularSystemError(HypermatrixError):
    """A Cramer-rule linear system is numerically singular."""

    def __init__(self, message, det_magnitude=None):
        super().__init__(message)
        self.det_magnitude = det_magnitude


class ConditioningError(HypermatrixError):
    """An iteration produced a transform too ill-conditioned to continue."""


class PreconditionError(HypermatrixError):
    """An input violates a documented precondition of the operation."""


class ParseError(HypermatrixError):
    """A serialized file is malformed; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
