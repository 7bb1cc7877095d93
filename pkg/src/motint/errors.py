"""Exception hierarchy shared by every motint module."""


class MotintError(Exception):
    """Base class for all library errors."""


class RealizationMismatch(MotintError, ValueError):
    pass


class NonTateClass(MotintError, ValueError):
    """A Hodge-Deligne monomial u^a v^b with a != b cannot be counted."""


class NonPolynomialClass(MotintError, ValueError):
    pass


class PrecisionTooSmall(MotintError, ValueError):
    pass


class NotSmooth(MotintError, ValueError):
    pass


class UnsupportedCenter(MotintError, ValueError):
    pass


class BadCodim(MotintError, ValueError):
    pass


class InvalidContact(MotintError, ValueError):
    pass


class DivergentFamily(MotintError, ArithmeticError):
    """Too many parts of a countable family sit above the precision cutoff."""


class InconsistentTransform(MotintError, ValueError):
    pass


class BudgetExceeded(MotintError, RuntimeError):
    pass


class LevelTooLow(MotintError, ValueError):
    pass


class InputError(MotintError, ValueError):
    """Malformed or invariant-violating JSON input.

    ``path`` is a JSONPath-like pointer into the offending document.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.message = message
        self.path = path
