"""Exception hierarchy shared by all modules.

The CLI maps these onto distinct exit codes, so raising the right class
matters more than the message text.
"""


class FringeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(FringeError):
    """Invalid parameters, incompatible shapes, or malformed configuration."""


class DomainError(FringeError):
    """Inputs are well-formed but outside the mathematical domain of an operation."""


class ImageIOError(FringeError):
    """File could not be read or written in a supported image format."""
