"""Exception hierarchy shared by all modules."""


class SFTError(Exception):
    """Base class for every error raised by this package."""


class InvalidMatrix(SFTError, ValueError):
    pass


class InadmissibleWord(SFTError, ValueError):
    pass


class InadmissiblePoint(InadmissibleWord):
    pass


class TableError(SFTError, ValueError):
    """A function table does not match the admissible words of its matrix."""


class NotIrreducible(SFTError):
    pass


class NotPrimitive(SFTError):
    pass


class NoConvergence(SFTError):
    pass


class CapExceeded(SFTError):
    pass


class EmptySet(SFTError, ValueError):
    pass


class EmptySubset(EmptySet):
    pass


class NotInvariant(SFTError, ValueError):
    pass


class InfiniteDivergence(SFTError, ValueError):
    pass


class NotDecreasing(SFTError, ValueError):
    pass


class HTooSmall(SFTError, ValueError):
    pass


class DegenerateFit(SFTError):
    pass
