class ApiRulerError(Exception):
    """Base class for all errors raised by this package."""


class UnparsableDocument(ApiRulerError):
    """The input is not valid JSON or YAML."""


class NotAnOpenApiDocument(ApiRulerError):
    """Parsed fine, but carries no "openapi"/"swagger" version key."""


class DocumentTooLarge(ApiRulerError):
    """The source text exceeds the configured byte cap."""


class AnalysisAborted(ApiRulerError):
    """A resource cap was breached mid-analysis; partial results discarded."""


class EmptyToken(ApiRulerError):
    """Word segmentation was asked to split an empty token."""


class InsufficientClasses(ApiRulerError):
    """Classifier training needs at least two distinct labels."""


class TooFewSamples(ApiRulerError):
    """Cross-validation needs at least k samples."""


class ModelMismatch(ApiRulerError):
    """A persisted classifier model was built with a different preprocessing
    pipeline than the one in this build."""
