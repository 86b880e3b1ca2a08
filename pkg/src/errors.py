"""
Exception hierarchy shared by every package.

All library errors derive from NdlError so the CLI can report them with a
one-line diagnostic. Errors describing bad values also derive from ValueError.

Dependencies: None
"""


class NdlError(Exception):
    """Base class for all spike-detector errors."""


class FormatError(NdlError, ValueError):
    """File does not follow the expected container format (magic, version)."""


class CorruptionError(NdlError, ValueError):
    """File header is valid but the payload is truncated or inconsistent."""


class ValidationError(NdlError, ValueError):
    """A domain object violates one of its invariants."""


class MontageError(NdlError, ValueError):
    """A montage references a channel the recording does not have."""


class ParameterError(NdlError, ValueError):
    """An argument is outside its allowed range."""


class DimensionError(NdlError, ValueError):
    """Array shapes do not agree."""


class UndefinedMetricError(NdlError, ValueError):
    """A metric is not defined for the given input (e.g. a single class)."""


class DataError(NdlError, ValueError):
    """Input data cannot support the requested operation."""


class VersionError(NdlError):
    """Saved artifact was written by an incompatible format version."""


class DivergenceError(NdlError):
    """Training produced a non-finite loss."""


class ConfigError(NdlError, ValueError):
    """Configuration file or flag is invalid."""
