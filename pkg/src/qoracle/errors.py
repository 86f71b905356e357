"""Exception types shared across the package."""


class QOracleError(Exception):
    """Base class for all package errors."""


class ValidationError(QOracleError, ValueError):
    """Bad qubit indices, incompatible registers, out-of-range values."""


class AliasingError(ValidationError):
    """Polynomial range does not fit the value register without wrap-around."""


class ResourceError(QOracleError, ValueError):
    """Requested simulation exceeds the desk-scale qubit budget."""


class ParseError(QOracleError, ValueError):
    """Polynomial text could not be parsed.

    Attributes:
        position: 0-based character offset where parsing failed.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
