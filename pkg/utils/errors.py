"""
Exception hierarchy for regenmc.

Every error derives from RegenError and from the builtin exception that
describes its category, so callers can catch either.
"""

from typing import Optional


class RegenError(Exception):
    """Base class for all regenmc errors."""


class InputError(RegenError, ValueError):
    """Invalid argument or violated precondition."""


class MinorizationError(InputError):
    """Minorization function h returned a value outside [0, 1]."""


class NoRegenerationsError(InputError):
    """An estimator that needs complete tours received none."""


class UnsupportedOracleError(InputError):
    """No analytic oracle exists for the requested chain."""


class RankDeficiencyError(InputError):
    """Design matrix is not of full column rank."""


class ConfigError(RegenError, ValueError):
    """Experiment configuration is incomplete or invalid."""


class TuningError(RegenError, RuntimeError):
    """Pilot run produced draws that cannot define a small set."""


class CheckFailedError(RegenError, RuntimeError):
    """A schedule, consistency or diagnostic check failed (exit code 1)."""


class NumericalError(RegenError, ArithmeticError):
    """A density or probability evaluated to a non-finite value."""

    def __init__(self, message: str, step: Optional[int] = None):
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
        self.step = step


class ParseError(RegenError, ValueError):
    """Malformed input file; carries the offending path and line number."""

    def __init__(self, path: str, line: Optional[int], reason: str):
        location = f"{path}, line {line}" if line is not None else path
        super().__init__(f"Failed to parse {location}: {reason}")
        self.path = path
        self.line = line
        self.reason = reason
