"""Exception hierarchy shared across the package."""


class HialError(Exception):
    """Base class for all errors raised by this package."""


class DataError(HialError):
    """Malformed or inconsistent input data (files, edge lists, features)."""


class ConfigError(HialError):
    """Invalid or degenerate configuration (parameter out of range, etc.)."""
