"""Exception hierarchy shared by all modules."""


class UnsharpError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(UnsharpError, ValueError):
    """Input JSON does not match the expected schema."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SizeCapExceeded(UnsharpError):
    """An exhaustive computation would exceed its configured cap."""


# order core
class CycleError(UnsharpError, ValueError):
    pass


class UnknownLabel(UnsharpError, KeyError):
    pass


class NotDirected(UnsharpError, ValueError):
    pass


class PartialMap(UnsharpError, ValueError):
    pass


# interval domain
class Unbounded(UnsharpError, ValueError):
    pass


# universal algebra
class UnboundVariable(UnsharpError, KeyError):
    pass


# matrices and contexts
class NotHermitian(UnsharpError, ValueError):
    pass


class NoConvergence(UnsharpError, ArithmeticError):
    pass


class NonCommuting(UnsharpError, ValueError):
    pass


class DimMismatch(UnsharpError, ValueError):
    pass


class NotHomomorphism(UnsharpError, ValueError):
    pass


class NotProjection(UnsharpError, ValueError):
    pass


class NotContext(UnsharpError, ValueError):
    """Projections fail to form a partition of unity."""


# daseinisation
class NotDownwardClosed(UnsharpError, ValueError):
    pass


class NotOrderPreserving(UnsharpError, ValueError):
    """Section intervals fail to shrink along the context order."""


# partitions of the naturals
class MalformedCells(UnsharpError, ValueError):
    pass


class UnsupportedFamily(UnsharpError, ValueError):
    pass
