"""Exception types shared across the toolkit."""

from __future__ import annotations


class DeringError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(DeringError):
    """A series or file contained no samples."""


class ParseError(DeringError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class NonUniformSampling(DeringError):
    """Timestamps deviate from a uniform grid; carries the worst sample index."""

    def __init__(self, message: str, worst_index: int):
        super().__init__(f"{message} (worst at index {worst_index})")
        self.worst_index = worst_index


class NoPeak(DeringError):
    """The spectrum is too flat to contain a dominant peak."""


class NyquistViolation(DeringError):
    """A requested frequency is at or above the Nyquist limit of the grid."""


class Overdamped(DeringError):
    """Oscillator coefficients admit no oscillatory (complex) root pair."""


class StepSizeUnstable(DeringError):
    """Simulation step too coarse for the oscillator's natural frequency."""


class NonConvergence(DeringError):
    """Gain iteration hit its step limit; carries the last iterate."""

    def __init__(self, message: str, last_gain, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.last_gain = last_gain
        self.residual = residual
