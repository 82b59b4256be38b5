"""Exception types shared across the package."""


class SupportSizeError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SupportSizeError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateDegreeError(ParameterError):
    """The polynomial degree rule produced L = 0; use the plug-in estimator instead."""


class EmptyInputError(ParameterError):
    """An operation that needs data received an empty input."""


class UndefinedEstimatorError(SupportSizeError):
    """The estimator is not defined on this sample (e.g. zero coverage estimate)."""


class DecodeError(SupportSizeError, ValueError):
    """Input bytes are not valid in the declared encoding."""

    def __init__(self, message, byte_offset=None):
        super().__init__(message)
        self.byte_offset = byte_offset


class FingerprintFormatError(SupportSizeError, ValueError):
    """A fingerprint file violates the ``j h_j`` line format."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class SolverError(SupportSizeError, RuntimeError):
    """An iterative or algebraic solver failed to produce a certified result."""


class PrecisionError(SupportSizeError, RuntimeError):
    """A requested truncation/cutoff cannot certify the demanded accuracy."""
