"""The 14 design-rule checkers.

Every checker is a pure function ``check(document, services) -> [Violation]``
over an immutable ApiDocument; checkers never raise, they return violations
or nothing.  Rule metadata lives in RULES, ordered as reported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from . import classifier as nb
from .lexicon import Number, split_words


class Category(Enum):
    URI_DESIGN = "URI Design"
    METADATA_DESIGN = "Metadata Design"
    REQUEST_METHODS = "Request Methods"
    HTTP_STATUS_CODES = "HTTP Status Codes"


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class RuleDescriptor:
    id: str
    title: str
    category: Category
    severity: Severity
    suggestion: str


@dataclass(frozen=True)
class Violation:
    rule_id: str
    path_template: str
    method: str | None
    line: int  # 0 = unknown
    message: str
    evidence: str
    severity: Severity | None = None  # None = inherit from the rule descriptor


class SegmentKind(Enum):
    COLLECTION = "Collection"
    DOCUMENT = "Document"
    STORE = "Store"
    CONTROLLER_CANDIDATE = "ControllerCandidate"
    TEMPLATE_PARAMETER = "TemplateParameter"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class SegmentClass:
    segment: str
    kind: SegmentKind


def _descriptor(rule_id, title, category, suggestion):
    severity = Severity.ERROR if "must" in title else Severity.WARNING
    return RuleDescriptor(id=rule_id, title=title, category=category,
                          severity=severity, suggestion=suggestion)


RULES = [
    _descriptor(
        "PluralNoun",
        "A plural noun should be used for collection or store names",
        Category.URI_DESIGN,
        "Rename the collection segment to its plural form and keep "
        "collections and documents alternating along the path.",
    ),
    _descriptor(
        "SingularNoun",
        "A singular noun should be used for document names",
        Category.URI_DESIGN,
        "Rename the document segment to its singular form.",
    ),
    _descriptor(
        "VerbController",
        "A verb or verb phrase should be used for controller names",
        Category.URI_DESIGN,
        "Name the controller segment with a verb, e.g. 'activate' instead "
        "of 'activation'.",
    ),
    _descriptor(
        "NoTrailingSlash",
        "A trailing forward slash (/) should not be included in URIs",
        Category.URI_DESIGN,
        "Drop the trailing slash from the path.",
    ),
    _descriptor(
        "ForwardSlash",
        "Forward slash separator (/) must be used to indicate a hierarchical "
        "relationship",
        Category.URI_DESIGN,
        "Split the segment into separate path segments joined by '/'.",
    ),
    _descriptor(
        "NoFileExtensions",
        "File extensions should not be included in URIs",
        Category.URI_DESIGN,
        "Remove the extension and use the Content-Type header to convey the "
        "representation format.",
    ),
    _descriptor(
        "NoCRUDNames",
        "CRUD function names should not be used in URIs",
        Category.URI_DESIGN,
        "Express the operation through the HTTP method instead of the path, "
        "e.g. 'GET /users' instead of '/getUsers'.",
    ),
    _descriptor(
        "NoUnderscores",
        "Underscores (_) should not be used in URI",
        Category.URI_DESIGN,
        "Replace underscores with hyphens.",
    ),
    _descriptor(
        "Hyphens",
        "Hyphens (-) should be used to improve the readability of URIs",
        Category.URI_DESIGN,
        "Separate the words of the segment with hyphens.",
    ),
    _descriptor(
        "Lowercase",
        "Lowercase letters should be preferred in URI paths",
        Category.URI_DESIGN,
        "Lowercase all literal path segments.",
    ),
    _descriptor(
        "ContentType",
        "Content-Type must be used",
        Category.METADATA_DESIGN,
        "Declare the content type of every request and response body, "
        "directly or via a components reference.",
    ),
    _descriptor(
        "NoTunnel",
        "GET and POST must not be used to tunnel other request methods",
        Category.REQUEST_METHODS,
        "Use the HTTP method whose semantics match the described behavior.",
    ),
    _descriptor(
        "GETRetrieve",
        "GET must be used to retrieve a representation of a resource",
        Category.REQUEST_METHODS,
        "Remove the request body from the GET operation and define a 200 or "
        "default response.",
    ),
    _descriptor(
        "RC401",
        "401 (Unauthorized) must be used when there is a problem with the "
        "client's credentials",
        Category.HTTP_STATUS_CODES,
        "Define a 401 response with the standard 'Unauthorized' reason for "
        "every secured operation.",
    ),
]

RULES_BY_ID = {rule.id: rule for rule in RULES}
ALL_RULE_IDS = [rule.id for rule in RULES]


class RuleServices:
    """Shared immutable inputs for the checkers: lexicon, classifier, knobs."""

    def __init__(self, lexicon, tunnel_threshold=0.7, classifier_model=None,
                 classifier_model_path=None):
        self.lexicon = lexicon
        self.tunnel_threshold = tunnel_threshold
        self._model = classifier_model
        self._model_path = classifier_model_path

    def classifier_model(self):
        if self._model is None:
            if self._model_path:
                self._model = nb.load_model(self._model_path)
            else:
                self._model = nb.starter_model()
        return self._model


def _is_template(segment):
    return segment.startswith("{") and segment.endswith("}")


def _contains_verb(lexicon, segment):
    return any(lexicon.classify_word(w).is_verb for w in split_words(segment))


def classify_segments(path, lexicon):
    """Structural classification of a path's segments.

    Collections precede template parameters; documents follow collections
    or parameters; the final literal of a POST-only endpoint that carries a
    verb is a controller candidate.  Stores are not distinguishable from
    collections in URI structure and are conflated with them.
    """
    segments = path.segments
    methods = set(path.operations)
    post_only = methods == {"post"}
    classes = []
    for i, segment in enumerate(segments):
        nxt = segments[i + 1] if i + 1 < len(segments) else None
        if _is_template(segment):
            kind = SegmentKind.TEMPLATE_PARAMETER
        elif nxt is not None and _is_template(nxt):
            kind = SegmentKind.COLLECTION
        elif (i == len(segments) - 1 and post_only
              and _contains_verb(lexicon, segment)):
            kind = SegmentKind.CONTROLLER_CANDIDATE
        elif classes and classes[-1].kind in (SegmentKind.COLLECTION,
                                              SegmentKind.TEMPLATE_PARAMETER):
            kind = SegmentKind.DOCUMENT
        elif i == 0 and nxt is not None and not _is_template(nxt):
            words = split_words(segment)
            sense = lexicon.classify_word(words[-1]) if words else None
            if sense is not None and sense.number == Number.PLURAL:
                kind = SegmentKind.COLLECTION
            else:
                kind = SegmentKind.UNCLASSIFIED
        else:
            kind = SegmentKind.UNCLASSIFIED
        classes.append(SegmentClass(segment=segment, kind=kind))
    return classes


def check_no_trailing_slash(document, services):
    violations = []
    for path in document.paths:
        if path.template != "/" and path.template.endswith("/"):
            violations.append(Violation(
                rule_id="NoTrailingSlash",
                path_template=path.template,
                method=None,
                line=path.line,
                message="Path ends with a trailing slash",
                evidence=path.template,
            ))
    return violations


def check_no_underscores(document, services):
    violations = []
    for path in document.paths:
        literal_hit = None
        param_hit = None
        for segment in path.segments:
            if _is_template(segment):
                if "_" in segment and param_hit is None:
                    param_hit = segment
            elif "_" in segment and literal_hit is None:
                literal_hit = segment
        if literal_hit is not None:
            violations.append(Violation(
                rule_id="NoUnderscores",
                path_template=path.template,
                method=None,
                line=path.line,
                message="Path segment contains an underscore",
                evidence=literal_hit,
            ))
        if param_hit is not None:
            violations.append(Violation(
                rule_id="NoUnderscores",
                path_template=path.template,
                method=None,
                line=path.line,
                message="Template parameter name contains an underscore",
                evidence=param_hit,
            ))
    return violations


def check_lowercase(document, services):
    violations = []
    for path in document.paths:
        for segment in path.segments:
            if not _is_template(segment) and any(ch.isupper() for ch in segment):
                violations.append(Violation(
                    rule_id="Lowercase",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message="Path segment contains uppercase letters",
                    evidence=segment,
                ))
                break
    return violations


def check_hyphens(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        for segment in path.segments:
            if _is_template(segment) or "-" in segment:
                continue
            words = split_words(segment)
            if len(words) != 1:
                # camelCase/underscore/dot already separates words; other
                # rules own those cases
                continue
            result = lexicon.segment(words[0]) if words[0] else None
            if result is not None and len(result.words) >= 2 and not result.residual:
                violations.append(Violation(
                    rule_id="Hyphens",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message=f"Segment '{segment}' contains several words; "
                            f"consider '{'-'.join(result.words)}'",
                    evidence=segment,
                ))
    return violations


def check_no_file_extensions(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        for segment in path.segments:
            if _is_template(segment):
                continue
            extension = lexicon.match_extension(segment)
            if extension:
                violations.append(Violation(
                    rule_id="NoFileExtensions",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message=f"Segment '{segment}' carries the file extension "
                            f"'{extension}'",
                    evidence=extension,
                ))
    return violations


def check_no_crud_names(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        for segment in path.segments:
            if _is_template(segment):
                continue
            token = lexicon.match_crud(segment)
            if token:
                violations.append(Violation(
                    rule_id="NoCRUDNames",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message=f"Segment '{segment}' exposes the CRUD verb "
                            f"'{token}'",
                    evidence=token,
                ))
    return violations


_SEPARATORS_RE = re.compile(r"[.,;:|]")


def check_forward_slash(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        for segment in path.segments:
            if _is_template(segment) or not _SEPARATORS_RE.search(segment):
                continue
            if lexicon.match_extension(segment) is not None:
                continue  # NoFileExtensions owns this segment
            if lexicon._is_namespace_style(segment):
                continue
            parts = [p for p in _SEPARATORS_RE.split(segment) if p]
            known = [p for p in parts if p.lower() in lexicon.frequency]
            if len(parts) >= 2 and len(known) >= 2:
                violations.append(Violation(
                    rule_id="ForwardSlash",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message=f"Segment '{segment}' joins words with a "
                            f"non-slash separator",
                    evidence=segment,
                ))
    return violations


def _final_word(segment):
    words = split_words(segment)
    return words[-1] if words else ""


def check_plural_noun(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        classes = classify_segments(path, lexicon)
        for sc in classes:
            if sc.kind != SegmentKind.COLLECTION:
                continue
            sense = lexicon.classify_word(_final_word(sc.segment))
            if sense.number == Number.SINGULAR:
                violations.append(Violation(
                    rule_id="PluralNoun",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message=f"Collection segment '{sc.segment}' uses a "
                            f"singular noun",
                    evidence=sc.segment,
                ))
        for left, right in zip(classes, classes[1:]):
            if (left.kind == SegmentKind.COLLECTION
                    and right.kind == SegmentKind.COLLECTION):
                violations.append(Violation(
                    rule_id="PluralNoun",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message="Two consecutive collections without an "
                            "intervening document or parameter",
                    evidence=f"{left.segment}/{right.segment}",
                ))
                break
    return violations


def check_singular_noun(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        for sc in classify_segments(path, lexicon):
            if sc.kind != SegmentKind.DOCUMENT:
                continue
            sense = lexicon.classify_word(_final_word(sc.segment))
            if sense.number == Number.PLURAL:
                violations.append(Violation(
                    rule_id="SingularNoun",
                    path_template=path.template,
                    method=None,
                    line=path.line,
                    message=f"Document segment '{sc.segment}' uses a plural "
                            f"noun",
                    evidence=sc.segment,
                ))
    return violations


def check_verb_controller(document, services):
    lexicon = services.lexicon
    violations = []
    for path in document.paths:
        if not path.segments:
            continue
        classes = classify_segments(path, lexicon)
        final = classes[-1]
        if _is_template(final.segment) or final.kind == SegmentKind.COLLECTION:
            continue
        if len(classes) < 2 or classes[-2].kind not in (
                SegmentKind.DOCUMENT, SegmentKind.TEMPLATE_PARAMETER):
            continue
        for method in ("get", "post"):
            if method not in path.operations:
                continue
            if not _contains_verb(lexicon, final.segment):
                violations.append(Violation(
                    rule_id="VerbController",
                    path_template=path.template,
                    method=method.upper(),
                    line=path.operations[method].line or path.line,
                    message=f"Controller segment '{final.segment}' has no "
                            f"verb",
                    evidence=final.segment,
                ))
    return violations


def _body_bearing(status_key):
    if status_key == "default":
        return True
    return not (status_key == "204" or status_key == "304"
                or status_key.startswith("1"))


def check_content_type(document, services):
    violations = []
    for path in document.paths:
        for method, op in path.operations.items():
            if op.has_request_body and not op.request_content_types:
                violations.append(Violation(
                    rule_id="ContentType",
                    path_template=path.template,
                    method=op.method,
                    line=op.line or path.line,
                    message="Request body declares no content type",
                    evidence="requestBody",
                ))
            for status_key in op.responses:
                response = op.responses[status_key]
                if _body_bearing(status_key) and not response.content_types:
                    violations.append(Violation(
                        rule_id="ContentType",
                        path_template=path.template,
                        method=op.method,
                        line=op.line or path.line,
                        message=f"Response {status_key} declares no content "
                                f"type",
                        evidence=status_key,
                    ))
    return violations


def check_get_retrieve(document, services):
    violations = []
    for path in document.paths:
        op = path.operations.get("get")
        if op is None:
            continue
        if op.has_request_body:
            violations.append(Violation(
                rule_id="GETRetrieve",
                path_template=path.template,
                method="GET",
                line=op.line or path.line,
                message="GET operation carries a request body",
                evidence="requestBody",
            ))
        if "200" not in op.responses and "default" not in op.responses:
            violations.append(Violation(
                rule_id="GETRetrieve",
                path_template=path.template,
                method="GET",
                line=op.line or path.line,
                message="GET operation defines neither a 200 nor a default "
                        "response",
                evidence=",".join(sorted(op.responses)) or "no responses",
            ))
    return violations


# Standard HTTP reason phrases other than Unauthorized; a 401 described with
# one of these signals a mislabeled response.
_OTHER_REASON_PHRASES = (
    "Forbidden", "Not Found", "Bad Request", "Payment Required",
    "Method Not Allowed", "Not Acceptable", "Conflict", "Gone",
    "Internal Server Error", "Service Unavailable", "Too Many Requests",
)
_OTHER_REASON_RE = re.compile(
    r"\b(" + "|".join(re.escape(p) for p in _OTHER_REASON_PHRASES) + r")\b",
    re.IGNORECASE,
)


def check_rc401(document, services):
    violations = []
    for path in document.paths:
        for method, op in path.operations.items():
            if not op.security_schemes:
                continue
            if "401" not in op.responses:
                violations.append(Violation(
                    rule_id="RC401",
                    path_template=path.template,
                    method=op.method,
                    line=op.line or path.line,
                    message="Secured operation defines no 401 (Unauthorized) "
                            "response",
                    evidence=",".join(op.security_schemes),
                ))
                continue
            description = op.responses["401"].description or ""
            match = _OTHER_REASON_RE.search(description)
            if match and "unauthorized" not in description.lower():
                violations.append(Violation(
                    rule_id="RC401",
                    path_template=path.template,
                    method=op.method,
                    line=op.line or path.line,
                    message=f"401 response is described as "
                            f"'{match.group(1)}' instead of 'Unauthorized'",
                    evidence=description,
                    severity=Severity.WARNING,
                ))
    return violations


_TUNNEL_VERBS = {"GET", "POST", "PUT", "PATCH", "DELETE"}


def check_no_tunnel(document, services):
    violations = []
    model = None
    for path in document.paths:
        for method in ("get", "post"):
            op = path.operations.get(method)
            if op is None:
                continue
            text = " ".join(part for part in (op.summary, op.description) if part).strip()
            if not text:
                continue
            if model is None:
                model = services.classifier_model()
            prediction = nb.predict(model, text)
            if prediction.label not in _TUNNEL_VERBS:
                continue  # invalid/low-quality description: not a violation
            if (prediction.label != op.method
                    and prediction.posterior[prediction.label]
                    >= services.tunnel_threshold):
                violations.append(Violation(
                    rule_id="NoTunnel",
                    path_template=path.template,
                    method=op.method,
                    line=op.line or path.line,
                    message=f"Description suggests {prediction.label} "
                            f"semantics on a {op.method} operation",
                    evidence=text,
                ))
    return violations


CHECKERS = {
    "PluralNoun": check_plural_noun,
    "SingularNoun": check_singular_noun,
    "VerbController": check_verb_controller,
    "NoTrailingSlash": check_no_trailing_slash,
    "ForwardSlash": check_forward_slash,
    "NoFileExtensions": check_no_file_extensions,
    "NoCRUDNames": check_no_crud_names,
    "NoUnderscores": check_no_underscores,
    "Hyphens": check_hyphens,
    "Lowercase": check_lowercase,
    "ContentType": check_content_type,
    "NoTunnel": check_no_tunnel,
    "GETRetrieve": check_get_retrieve,
    "RC401": check_rc401,
}


def violation_severity(violation):
    if violation.severity is not None:
        return violation.severity
    return RULES_BY_ID[violation.rule_id].severity
