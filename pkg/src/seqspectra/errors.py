"""Exception hierarchy shared by every module."""


class SeqSpectraError(Exception):
    """Base class for all library errors."""


class InvalidParams(SeqSpectraError, ValueError):
    """The (p, n, k, d) tuple violates a field-tower constraint."""


class CapExceeded(SeqSpectraError, ValueError):
    """p^n is larger than the configured table cap."""


class ZeroArgument(SeqSpectraError, ValueError):
    pass


class NotInQuadraticSubfield(SeqSpectraError, ArithmeticError):
    """A count vector is not constant on residue / non-residue classes."""


class NonIntegerCount(SeqSpectraError, ArithmeticError):
    pass


class NonIntegerWeight(SeqSpectraError, ArithmeticError):
    pass


class NonSubfieldKernel(SeqSpectraError, ArithmeticError):
    """A kernel size is not a power of p^k."""


class UnsupportedBranch(SeqSpectraError, NotImplementedError):
    pass
