"""Parsing of OpenAPI documents into a normalized in-memory model.

Accepts OpenAPI 2.0 / 3.0 / 3.1 in JSON or YAML.  Version 2.0 documents are
converted to a comparable 3.0 tree before modeling.  Parsing is tolerant:
missing optional fields become empty values, never failures.  A separate
pass maps every path and operation key back to its source line number by
scanning the original text, so the parser itself stays pluggable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

import yaml

from .errors import DocumentTooLarge, NotAnOpenApiDocument, UnparsableDocument

DEFAULT_MAX_BYTES = 20 * 1024 * 1024
REF_DEPTH_CAP = 8

HTTP_METHODS = ("get", "post", "put", "patch", "delete", "head", "options")


class SpecVersion(Enum):
    V2 = "2.0"
    V30 = "3.0"
    V31 = "3.1"


@dataclass
class ResponseEntry:
    status_key: str
    description: str | None = None
    content_types: list = field(default_factory=list)
    resolved_via_reference: bool = False


@dataclass
class OperationEntry:
    method: str  # upper-case HTTP method
    summary: str | None = None
    description: str | None = None
    has_request_body: bool = False
    request_content_types: list = field(default_factory=list)
    responses: dict = field(default_factory=dict)  # status key -> ResponseEntry
    security_schemes: list = field(default_factory=list)
    line: int = 0


@dataclass
class PathEntry:
    template: str
    segments: list
    operations: dict  # lower-case method -> OperationEntry
    line: int = 0


@dataclass
class ApiDocument:
    source_name: str
    spec_version: SpecVersion
    paths: list
    components: dict = field(default_factory=dict)
    global_security: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def _detect_json(data):
    for ch in data.lstrip():
        return ch in "{["
    return False


def convert_v2(tree):
    """Best-effort Swagger 2.0 -> OpenAPI 3.0 tree conversion.

    Returns the converted tree and a list of conversion warnings for
    constructs that were dropped.
    """
    warnings = []
    out = {"openapi": "3.0.0"}
    for key in ("info", "tags", "security", "externalDocs"):
        if key in tree:
            out[key] = tree[key]

    components = {}
    if isinstance(tree.get("definitions"), dict):
        components["schemas"] = tree["definitions"]
    if isinstance(tree.get("responses"), dict):
        components["responses"] = {
            name: _convert_v2_response(resp, tree.get("produces") or [])
            for name, resp in tree["responses"].items()
        }
    if isinstance(tree.get("securityDefinitions"), dict):
        components["securitySchemes"] = tree["securityDefinitions"]
    if components:
        out["components"] = components

    global_consumes = tree.get("consumes") or []
    global_produces = tree.get("produces") or []

    paths_out = {}
    for template, item in (tree.get("paths") or {}).items():
        if not isinstance(item, dict):
            warnings.append(f"dropped unconvertible path item {template!r}")
            continue
        item_out = {k: v for k, v in item.items() if k.startswith("x-")}
        shared_params = item.get("parameters") or []
        for method in HTTP_METHODS:
            op = item.get(method)
            if not isinstance(op, dict):
                continue
            consumes = op.get("consumes", global_consumes) or []
            produces = op.get("produces", global_produces) or []
            op_out = {}
            for key in ("summary", "description", "operationId", "tags",
                        "deprecated", "security"):
                if key in op:
                    op_out[key] = op[key]
            params_out = []
            for param in list(shared_params) + list(op.get("parameters") or []):
                if not isinstance(param, dict):
                    continue
                where = param.get("in")
                if where == "body":
                    content = {ct: {"schema": param.get("schema", {})} for ct in consumes}
                    op_out["requestBody"] = {"content": content}
                    if param.get("required"):
                        op_out["requestBody"]["required"] = True
                elif where == "formData":
                    body = op_out.setdefault(
                        "requestBody",
                        {"content": {"application/x-www-form-urlencoded": {"schema": {}}}},
                    )
                    body.setdefault("content", {})
                else:
                    params_out.append(param)
            if params_out:
                op_out["parameters"] = params_out
            responses_out = {}
            for status, resp in (op.get("responses") or {}).items():
                responses_out[str(status)] = _convert_v2_response(resp, produces)
            op_out["responses"] = responses_out
            item_out[method] = op_out
        paths_out[template] = item_out
    out["paths"] = paths_out
    return out, warnings


def _convert_v2_response(resp, produces):
    if not isinstance(resp, dict):
        return {}
    if "$ref" in resp:
        ref = resp["$ref"].replace("#/responses/", "#/components/responses/")
        return {"$ref": ref}
    out = {}
    if "description" in resp:
        out["description"] = resp["description"]
    if produces:
        out["content"] = {ct: ({"schema": resp["schema"]} if "schema" in resp else {})
                          for ct in produces}
    elif "schema" in resp:
        out["content"] = {}
    return out


def _resolve_ref(node, components, warnings, depth=0):
    """Follow $ref chains into components up to the fixed depth cap."""
    seen_ref = False
    while isinstance(node, dict) and "$ref" in node:
        if depth >= REF_DEPTH_CAP:
            warnings.append(f"unresolved reference beyond depth {REF_DEPTH_CAP}: {node['$ref']}")
            return None, True
        ref = node["$ref"]
        seen_ref = True
        if not isinstance(ref, str) or not ref.startswith("#/components/"):
            warnings.append(f"unresolved reference: {ref!r}")
            return None, True
        parts = ref[len("#/components/"):].split("/")
        target = components
        for part in parts:
            if isinstance(target, dict) and part in target:
                target = target[part]
            else:
                warnings.append(f"unresolved reference: {ref}")
                return None, True
        node = target
        depth += 1
    return node, seen_ref


def _response_entry(status_key, raw, components, warnings):
    resolved, via_ref = _resolve_ref(raw, components, warnings)
    if resolved is None:
        return ResponseEntry(status_key=status_key, resolved_via_reference=True)
    description = resolved.get("description") if isinstance(resolved.get("description"), str) else None
    content_types = []
    content = resolved.get("content")
    if isinstance(content, dict):
        for ct, media in content.items():
            resolved_media, media_ref = _resolve_ref(media, components, warnings)
            via_ref = via_ref or media_ref
            content_types.append(str(ct))
    return ResponseEntry(
        status_key=status_key,
        description=description,
        content_types=content_types,
        resolved_via_reference=via_ref,
    )


_STATUS_RE = re.compile(r"^[1-5][0-9]{2}$")


def _operation_entry(method, raw, components, global_security, warnings):
    summary = raw.get("summary") if isinstance(raw.get("summary"), str) else None
    description = raw.get("description") if isinstance(raw.get("description"), str) else None

    has_body = False
    request_content_types = []
    body = raw.get("requestBody")
    if body is not None:
        has_body = True
        resolved, _ = _resolve_ref(body, components, warnings)
        if isinstance(resolved, dict) and isinstance(resolved.get("content"), dict):
            request_content_types = [str(ct) for ct in resolved["content"]]

    responses = {}
    raw_responses = raw.get("responses")
    if isinstance(raw_responses, dict):
        for status, resp in raw_responses.items():
            key = str(status)
            if key != "default" and not _STATUS_RE.match(key):
                warnings.append(f"ignored invalid response status key {key!r}")
                continue
            responses[key] = _response_entry(key, resp if isinstance(resp, dict) else {},
                                             components, warnings)

    if "security" in raw and isinstance(raw["security"], list):
        security = sorted({name for req in raw["security"]
                           if isinstance(req, dict) for name in req})
    else:
        security = list(global_security)

    return OperationEntry(
        method=method.upper(),
        summary=summary,
        description=description,
        has_request_body=has_body,
        request_content_types=request_content_types,
        responses=responses,
        security_schemes=security,
    )


def split_template(template):
    """"/users/{id}" -> ["users", "{id}"]; the root "/" has no segments."""
    return [seg for seg in template.split("/") if seg != ""]


def parse_document(data, source_name, max_bytes=DEFAULT_MAX_BYTES):
    """Parse JSON/YAML bytes into an ApiDocument.

    Raises UnparsableDocument, NotAnOpenApiDocument, or DocumentTooLarge;
    anything merely missing or malformed below the top level degrades to
    empty values plus a recorded warning.
    """
    if not data:
        raise UnparsableDocument("empty input")
    if len(data) > max_bytes:
        raise DocumentTooLarge(f"{len(data)} bytes exceeds cap of {max_bytes}")
    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data

    try:
        if _detect_json(text):
            tree = json.loads(text)
        else:
            tree = yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise UnparsableDocument(str(exc)) from exc
    if not isinstance(tree, dict):
        raise NotAnOpenApiDocument("top level is not a mapping")

    warnings = []
    if "swagger" in tree:
        spec_version = SpecVersion.V2
        tree, conv_warnings = convert_v2(tree)
        warnings.extend(conv_warnings)
    elif "openapi" in tree:
        version = str(tree.get("openapi"))
        spec_version = SpecVersion.V31 if version.startswith("3.1") else SpecVersion.V30
    else:
        raise NotAnOpenApiDocument('no "openapi" or "swagger" version key')

    components = tree.get("components") if isinstance(tree.get("components"), dict) else {}
    global_security = sorted({
        name for req in (tree.get("security") or [])
        if isinstance(req, dict) for name in req
    }) if isinstance(tree.get("security"), list) else []

    paths = []
    raw_paths = tree.get("paths")
    if isinstance(raw_paths, dict):
        for template, item in raw_paths.items():
            template = str(template)
            if not template.startswith("/"):
                warnings.append(f"ignored path not starting with '/': {template!r}")
                continue
            operations = {}
            if isinstance(item, dict):
                for method in HTTP_METHODS:
                    op = item.get(method)
                    if isinstance(op, dict):
                        operations[method] = _operation_entry(
                            method, op, components, global_security, warnings)
            paths.append(PathEntry(
                template=template,
                segments=split_template(template),
                operations=operations,
            ))

    return ApiDocument(
        source_name=source_name,
        spec_version=spec_version,
        paths=paths,
        components=components,
        global_security=global_security,
        warnings=warnings,
    )


def _key_pattern(key):
    escaped = re.escape(key)
    return re.compile(
        r'^\s*(?:"%s"|\'%s\'|%s)\s*:' % (escaped, escaped, escaped)
    )


def map_lines(data, document):
    """Assign 1-based source lines to every path and operation entry.

    Scans the original text for each key at key position; keys occurring
    more than once map to their first occurrence, unmappable entries keep
    line 0.  Best-effort by design: failure to locate is never an error.
    """
    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data
    lines = text.splitlines()

    for path in document.paths:
        pattern = _key_pattern(path.template)
        path.line = 0
        for i, line in enumerate(lines, start=1):
            if pattern.match(line):
                path.line = i
                break

    # Method keys are searched only inside the region between this path's
    # line and the next mapped path line.
    mapped = sorted((p.line, idx) for idx, p in enumerate(document.paths) if p.line > 0)
    next_line = {}
    for pos, (line_no, idx) in enumerate(mapped):
        next_line[idx] = mapped[pos + 1][0] - 1 if pos + 1 < len(mapped) else len(lines)

    for idx, path in enumerate(document.paths):
        if path.line == 0:
            continue
        end = next_line[idx]
        for method, op in path.operations.items():
            pattern = _key_pattern(method)
            op.line = 0
            for i in range(path.line, end):
                if i < len(lines) and pattern.match(lines[i]):
                    op.line = i + 1
                    break
    return document
