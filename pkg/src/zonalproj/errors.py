"""Exception types shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """Inputs are individually valid but incompatible (dimension, parity, length)."""


class ParityError(ContractError):
    """An even-only operation received a profile with odd-degree content."""


class SingularOperatorError(ArithmeticError):
    """A multiplier operator cannot be inverted."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NumericError(ArithmeticError):
    """A numerical routine produced non-finite or unverifiable output."""


class UnsupportedOrderError(ValueError):
    """The requested area-measure order is outside the supported range."""


class ParseError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source
