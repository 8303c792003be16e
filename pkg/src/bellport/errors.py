"""Exception hierarchy shared by all bellport modules."""


class BellportError(Exception):
    """Base class for every error raised by this package."""


class InvalidDimensionError(BellportError, ValueError):
    pass


class InvalidIndexError(BellportError, IndexError):
    pass


class SizeLimitError(BellportError, ValueError):
    """Raised when an exponential or factorial routine is asked for a size beyond its guard."""


class ConfigurationError(BellportError, ValueError):
    pass


class EmptyStateError(BellportError, ValueError):
    """Raised when a state with (numerically) zero norm cannot be normalized."""


class InsufficientDataError(BellportError, ValueError):
    pass


class ParseError(ConfigurationError):
    """Malformed config or data file. ``where`` carries line/field context."""

    def __init__(self, message: str, where: str | None = None) -> None:
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
