from .base_exceptions import (
    DCABaseException,
    DCAConfigurationError,
    DCAInvariantError,
    DCANumericError,
    DCAResourceError,
    DCAValidationError,
    create_configuration_error,
    create_invariant_error,
    create_numeric_error,
    create_resource_error,
    create_validation_error,
)
from .format_exceptions import (
    ArtifactFormatError,
    BadMagicError,
    TruncatedFileError,
    VersionMismatchError,
    create_bad_magic_error,
    create_truncation_error,
    create_version_error,
)

__all__ = [
    "DCABaseException",
    "DCAConfigurationError",
    "DCAInvariantError",
    "DCANumericError",
    "DCAResourceError",
    "DCAValidationError",
    "create_configuration_error",
    "create_invariant_error",
    "create_numeric_error",
    "create_resource_error",
    "create_validation_error",
    "ArtifactFormatError",
    "BadMagicError",
    "TruncatedFileError",
    "VersionMismatchError",
    "create_bad_magic_error",
    "create_truncation_error",
    "create_version_error",
]
