"""Static analysis of RESTful design rules in OpenAPI documents."""

__version__ = "0.1.0"

from .errors import (
    ApiRulerError,
    UnparsableDocument,
    NotAnOpenApiDocument,
    DocumentTooLarge,
    AnalysisAborted,
)
from .model import ApiDocument, parse_document, map_lines
from .engine import AnalysisConfig, Report, analyze, analyze_source

__all__ = [
    "ApiRulerError",
    "UnparsableDocument",
    "NotAnOpenApiDocument",
    "DocumentTooLarge",
    "AnalysisAborted",
    "ApiDocument",
    "parse_document",
    "map_lines",
    "AnalysisConfig",
    "Report",
    "analyze",
    "analyze_source",
]
