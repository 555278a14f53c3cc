"""Exception hierarchy shared by every module."""


class EvalError(Exception):
    """Base class for all irrepro errors."""


class ParseError(EvalError, ValueError):
    """Malformed input text. ``line`` is 1-based, or None when not line-specific."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(EvalError, ValueError):
    """Inputs are well formed but violate an operation's precondition."""


class NoRelevantDocuments(PreconditionError):
    """A topic has no document with positive gain, so normalised measures are undefined."""


class FetchError(EvalError, OSError):
    """Download or cache failure."""


class DigestMismatch(FetchError):
    """Downloaded or cached content does not match the manifest digest."""
