"""Exception hierarchy shared by every module."""


class GenusForgeError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(GenusForgeError, ValueError):
    pass


class NonUnitError(GenusForgeError, ArithmeticError):
    pass


class SymmetryViolationError(GenusForgeError, ValueError):
    pass


class UnsatisfiableRelationError(GenusForgeError):
    pass


class MissingChernNumberError(GenusForgeError, LookupError):
    pass


class ContractNotApplicableError(GenusForgeError):
    pass


class InsufficientTruncationError(GenusForgeError):
    pass


class UnsupportedError(GenusForgeError, NotImplementedError):
    pass


class ManifoldSpecError(GenusForgeError, ValueError):
    """Malformed manifold description; carries 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
