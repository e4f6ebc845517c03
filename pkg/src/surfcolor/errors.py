"""Exception types shared across the package."""


class SurfcolorError(Exception):
    """Base class for all package errors."""


class MapFormatError(SurfcolorError):
    """Raised when a rotation-system description is malformed."""


class EmbeddingError(SurfcolorError):
    """Raised when an operation produces or receives an invalid embedding."""


class SurgeryError(SurfcolorError):
    """Raised when a cut/classification request violates its preconditions."""


class PreconditionError(SurfcolorError):
    """Raised when a solver is called outside its stated preconditions."""


class ResourceLimitError(SurfcolorError):
    """Raised when a configured width/size/time budget is exceeded."""
