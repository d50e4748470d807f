"""
Error Types
One exception per failure mode of the toolkit. `Unsolvable` is a value, not an error.
"""


class WittCheckError(Exception):
    """Base class for every error raised by the toolkit."""


# --- fields ---
class NonPrime(WittCheckError, ValueError):
    pass


class BadModulus(WittCheckError, ValueError):
    pass


class DescriptorMismatch(WittCheckError, TypeError):
    pass


class DivisionByZero(WittCheckError, ZeroDivisionError):
    pass


class FieldTooSmall(WittCheckError, ValueError):
    pass


class NotRegular(WittCheckError, ValueError):
    pass


# --- algebras ---
class ArityMismatch(WittCheckError, ValueError):
    pass


class IndexOutOfRange(WittCheckError, IndexError):
    pass


class ContextMismatch(WittCheckError, TypeError):
    pass


class BadParam(WittCheckError, ValueError):
    pass


class CharTwoUnsupported(BadParam):
    """The construction degenerates in characteristic 2."""


class NotADerivation(WittCheckError, ValueError):
    pass


# --- linear algebra ---
class DimensionMismatch(WittCheckError, ValueError):
    pass


# --- size / scope ---
class Infeasible(WittCheckError):
    """The requested computation exceeds the configured size limits."""


class ExcludedConfiguration(Infeasible):
    """W_1 in characteristic 2 is not simple; checks that need simplicity refuse it."""


# --- pointwise maps ---
class OutOfDomain(WittCheckError, KeyError):
    pass


class DomainNotFull(WittCheckError, ValueError):
    pass


# --- I/O ---
class ElementFormatError(WittCheckError, ValueError):
    pass


class Unsolvable:
    """Marker returned by solvers when a linear system is inconsistent."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Unsolvable, cls).__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNSOLVABLE"

    def __bool__(self):
        return False


UNSOLVABLE = Unsolvable()
