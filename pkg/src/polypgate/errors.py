"""Exception hierarchy shared by every stage."""


class PolypGateError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PolypGateError, ValueError):
    """A configuration value violates its invariants or does not fit the image."""


class DimensionOverflowError(PolypGateError, ValueError):
    """The image is too large for 32-bit cumulative sums."""


class BoundsError(PolypGateError, IndexError):
    """A rectangle or window reaches outside the image."""


class ImageFormatError(PolypGateError, ValueError):
    """An image file or array is malformed or unsupported."""


class LabelsError(PolypGateError, ValueError):
    """A labels CSV could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EvaluationError(PolypGateError):
    """Every entry of an evaluation failed to load or run."""
