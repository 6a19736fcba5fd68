"""Exception hierarchy shared across the package.

Exit-code mapping for the CLI: anything rooted at DatasetLoadError (or a bare
OSError) is an I/O failure, everything else under MotionPasteError is a
validation failure.
"""


class MotionPasteError(Exception):
    """Base class for all errors raised by this package."""


class DatasetLoadError(MotionPasteError):
    """A referenced file or directory is missing or unreadable."""


class SchemaError(MotionPasteError):
    """On-disk data is readable but violates the documented layout."""


class CodecError(SchemaError):
    """A run-length encoded mask is internally inconsistent."""


class ValidationError(MotionPasteError):
    """In-memory data violates a type invariant or contract."""


class ConfigurationError(ValidationError):
    """A config value (or combination) cannot be acted on."""


class CapacityError(MotionPasteError):
    """An instance sequence is too short for the requested window."""
