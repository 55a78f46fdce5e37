"""
Exception hierarchy shared by the engines and the command-line front end
"""
from typing import Optional

from pydantic import ValidationError


class BassError(Exception):
    """Base class for every error raised by this package"""


class InputError(BassError, ValueError):
    """Malformed arguments: length mismatch, non-finite values, empty sets"""


class DegenerateGridError(InputError):
    """Too few distinct knots, or spacings that collapse numerically"""


class DomainError(InputError):
    """A value lies outside its mathematical domain"""


class ParseError(InputError):
    """Malformed input file"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(BassError):
    """Invalid command-line flags or configuration keys"""


class FactorizationError(BassError):
    """Cholesky factorization met a non-positive-definite pivot"""

    def __init__(self, message: str, pivot: Optional[int] = None):
        self.pivot = pivot
        if pivot is not None:
            message = f"{message} (pivot {pivot})"
        super().__init__(message)


class ModeSearchError(BassError):
    """Newton-Raphson search for the gamma proposal mode failed"""


class ChainError(BassError):
    """Fatal failure inside an MCMC sweep"""

    def __init__(self, message: str, sweep: Optional[int] = None):
        self.sweep = sweep
        if sweep is not None:
            message = f"sweep {sweep}: {message}"
        super().__init__(message)


class TooFewSamplesError(BassError):
    """Not enough retained draws to summarize a chain"""


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_CHAIN = 4


def exit_code_for(exc: BaseException) -> int:
    """
    Map an exception onto the command-line exit code contract

    Args:
        exc: The exception that aborted a command

    Returns:
        Process exit code
    """
    # Order matters: ParseError and DegenerateGridError are InputErrors too
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, DegenerateGridError):
        return EXIT_DEGENERATE
    if isinstance(exc, (ChainError, FactorizationError, ModeSearchError, TooFewSamplesError)):
        return EXIT_CHAIN
    if isinstance(exc, (UsageError, InputError, ValidationError)):
        return EXIT_USAGE
    raise exc
