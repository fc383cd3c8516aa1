class SSTError(ValueError):
    """Base class for all errors raised by sstlab."""


class GuardExceeded(SSTError):
    pass


class InsufficientStrings(SSTError):
    pass


class InvalidCodeword(SSTError):
    """Raised when a received word lies outside a stage's codeword image.

    This is the local-testability signal: a corrupted word that is not a
    codeword is detected here.
    """


class ConfigError(SSTError):
    pass
