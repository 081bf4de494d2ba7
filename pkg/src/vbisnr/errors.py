"""Exception types shared across the library.

The CLI maps these onto its exit-code contract, so new error conditions
should reuse one of the classes below rather than raising bare exceptions.
"""


class VbiSnrError(Exception):
    """Base class for all vbisnr errors."""


class InvalidInputError(VbiSnrError, ValueError):
    """A parameter, flag, or data value violates its contract."""


class CaptureFormatError(VbiSnrError):
    """A capture file could not be parsed or is internally inconsistent."""


class MeasurementImpossibleError(VbiSnrError):
    """The input is well formed but contains nothing measurable."""
