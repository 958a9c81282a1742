"""Exception types shared across the toolkit.

ValidationError (and subclasses) map to CLI exit code 1, everything else
to exit code 2.
"""


class ScribsalError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ScribsalError):
    """Input data violates a documented precondition."""


class ManifestError(ValidationError):
    """Dataset manifest is missing, malformed, or inconsistent."""


class DecodeError(ValidationError):
    """A raster file does not decode under the declared palette/format."""


class ParameterError(ValidationError):
    """A configuration value or function argument is out of its legal range."""


class CheckpointError(ScribsalError):
    """A parameter checkpoint cannot be read or does not match the model."""
