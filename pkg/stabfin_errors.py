"""Exception hierarchy shared by the stabfin modules."""


class StabfinError(Exception):
    """Base class for every error raised by stabfin."""


class UsageError(StabfinError, ValueError):
    """A scenario or command line names a bad parameter."""

    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class Mismatch(StabfinError, ValueError):
    """Operands belong to different groups, rings or shapes."""


class RingMismatch(Mismatch):
    pass


class InvalidTable(StabfinError, ValueError):
    pass


class NonCentralElement(StabfinError, ValueError):
    pass


class InfiniteGroup(StabfinError, ValueError):
    pass


class Unsupported(StabfinError, NotImplementedError):
    pass


class UnsupportedGroup(Unsupported):
    pass


class NotAUnit(StabfinError, ArithmeticError):
    pass


class NotPrime(StabfinError, ValueError):
    pass


class NotOneSidedPair(StabfinError, ValueError):
    pass


class NotUnitriangular(StabfinError, ValueError):
    pass


class NotCongruentModP(StabfinError, ValueError):
    pass


class ShapeMismatch(StabfinError, ValueError):
    pass


class ShapeViolation(StabfinError, ValueError):
    pass


class NonAbelianBase(StabfinError, ValueError):
    pass


class NotBasic(StabfinError, ValueError):
    pass


class NotSurjective(StabfinError, ValueError):
    pass


class NotLeftInverse(StabfinError, ValueError):
    pass


class NotLinearAlphabet(StabfinError, ValueError):
    pass


class InvalidEndomorphism(StabfinError, ValueError):
    """An alphabet endomorphism matrix ignores the generator orders."""


class BaseEmbeddingUnavailable(StabfinError):
    pass


class BudgetExceeded(StabfinError):
    """A search or enumeration would exceed its configured budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotAHomomorphism(StabfinError, ValueError):
    """A map fails the homomorphism law on a checked pair."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
