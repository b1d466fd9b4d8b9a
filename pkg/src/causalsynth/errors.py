"""Exception hierarchy shared by every module."""


class CausalSynthError(Exception):
    """Base class for all errors raised by this package."""


class _LookupError(CausalSynthError, KeyError):
    # KeyError would quote the message
    __str__ = Exception.__str__


class UnknownLetter(_LookupError):
    pass


class UnknownProcess(_LookupError):
    pass


class AlphabetMismatch(CausalSynthError, ValueError):
    pass


class TooLong(CausalSynthError, ValueError):
    pass


class GameSyntaxError(CausalSynthError, ValueError):
    """Malformed line in a .zgame or .zstrat file."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SemanticError(CausalSynthError, ValueError):
    """Well-formed input that describes an invalid object."""


class NotEnabled(CausalSynthError):
    """The play cannot be extended by the requested action."""


class NotPrime(CausalSynthError, ValueError):
    pass


class InvalidCertificate(CausalSynthError, ValueError):
    pass


class NotWinning(CausalSynthError, ValueError):
    pass


class IncompleteOrder(CausalSynthError, ValueError):
    pass


class InvalidOrdering(CausalSynthError, ValueError):
    pass
