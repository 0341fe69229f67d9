"""
Exception hierarchy shared by the library and the CLI.
"""

from typing import Any, Optional


class TubalError(Exception):
    """Base class for every error raised by tubal_solve."""

    exit_code: int = 2


class ShapeError(TubalError, ValueError):
    pass


class NonRealSpectrumError(TubalError, ValueError):
    """A Fourier spectrum that cannot have come from a real tensor."""


class DivergenceError(TubalError, ArithmeticError):
    def __init__(self, message: str, iteration: int = -1, trace: Optional[Any] = None):
        super().__init__(message)
        self.iteration = iteration
        self.trace = trace


class ConfigError(TubalError, ValueError):
    exit_code = 1


class FormatError(TubalError, OSError):
    exit_code = 3


class NonFiniteError(TubalError, ArithmeticError):
    pass


class DegenerateTensorError(TubalError, ValueError):
    """An operation that needs a nonzero tensor received a zero one."""
