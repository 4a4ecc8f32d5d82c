"""Exception hierarchy shared by every module."""


class SchmidtSepError(Exception):
    """Base class for all errors raised by this package."""


class InvalidState(SchmidtSepError, ValueError):
    """A matrix failed density-matrix validation."""


class DimensionMismatch(InvalidState):
    pass


# Same condition, raised where two objects disagree on local dimensions.
DimsMismatch = DimensionMismatch


class NotHermitian(InvalidState):
    pass


class NotUnitTrace(InvalidState):
    pass


class NotPositive(InvalidState):
    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class OutOfRange(SchmidtSepError, ValueError):
    pass


class UnsupportedDims(SchmidtSepError, ValueError):
    """Raised where only the 2x2 / 2x3 PPT oracle would make an answer exact."""


class NotSquareRealignment(SchmidtSepError, ValueError):
    pass


class NotCpt(SchmidtSepError, ValueError):
    """The Choi matrix of a channel is not a valid trace-preserving state."""


class NotOrthogonal(SchmidtSepError, ValueError):
    pass


class SvdFailure(SchmidtSepError, ArithmeticError):
    pass


class EigenFailure(SchmidtSepError, ArithmeticError):
    pass


class ParseError(SchmidtSepError, ValueError):
    pass
