"""HTTP service: template registry, validation/render/report endpoints,
demo instance store, and authority/ontology search.

Every non-2xx body is a uniform error envelope
`{"code", "message", "path"?, "issues"?}`; codes map to statuses via
STATUS_BY_CODE. Responses are canonical JSON (sorted keys) so identical
requests produce identical bytes in offline mode.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from metaforge.errors import GatewayError, MetaforgeError
from metaforge.gateway import Gateway, build_gateway
from metaforge.instance import (
    has_errors,
    new_instance,
    parse_instance,
    render_plan,
    serialize_jsonld,
    validate_instance,
)
from metaforge.instance.engine import ValidationIssue
from metaforge.report import generate_report
from metaforge.service.registry import TemplateRegistry
from metaforge.service.store import InstanceStore
from metaforge.template.model import SourceType, TermSourceSpec

STATUS_BY_CODE = {
    "MALFORMED_JSON": 400,
    "BAD_MODE": 400,
    "QUERY_EMPTY": 400,
    "UNKNOWN_SOURCE": 400,
    "UNKNOWN_SOURCE_ACRONYM": 400,
    "INVALID_IDENTIFIER": 400,
    "MALFORMED_ID": 400,
    "UNKNOWN_PATH": 400,
    "UNAUTHORIZED": 401,
    "UNKNOWN_TEMPLATE": 404,
    "NOT_FOUND": 404,
    "ID_CONFLICT": 409,
    "SCHEMA_VIOLATION": 422,
    "VALIDATION_FAILED": 422,
    "DUPLICATE_KEY": 422,
    "UPSTREAM_TIMEOUT": 502,
    "UPSTREAM_ERROR": 502,
    "UPSTREAM_SHAPE_ERROR": 502,
}


class CanonicalJSONResponse(JSONResponse):
    def render(self, content: Any) -> bytes:
        return (json.dumps(content, sort_keys=True, separators=(",", ":"),
                           ensure_ascii=False) + "\n").encode("utf-8")


def _error_response(exc: MetaforgeError) -> CanonicalJSONResponse:
    body: dict = {"code": exc.code, "message": exc.message}
    if exc.path:
        body["path"] = exc.path
    if exc.issues:
        body["issues"] = exc.issues
    return CanonicalJSONResponse(body, status_code=STATUS_BY_CODE.get(exc.code, 400))


async def _read_json(request: Request):
    raw = await request.body()
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MetaforgeError("MALFORMED_JSON", f"request body is not JSON: {exc}") from exc


def _issue_payload(issues: list[ValidationIssue]) -> dict:
    return {"issues": [x.to_dict() for x in issues]}


def _as_flag(value: str | None) -> bool:
    return value is not None and value.lower() not in ("", "0", "false", "no")


def create_app(data_dir: Path | str | None = None,
               offline: bool | None = None,
               cors_origins: list[str] | None = None,
               token: str | None = None,
               gateway: Gateway | None = None) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("METAFORGE_DATA_DIR", "metaforge-data"))
    registry = TemplateRegistry(data_dir)
    store = InstanceStore(data_dir)
    gw = gateway or build_gateway(offline=offline)
    token = token if token is not None else os.environ.get("METAFORGE_TOKEN")
    if cors_origins is None:
        raw_origins = os.environ.get("METAFORGE_CORS_ORIGINS", "*")
        cors_origins = [o.strip() for o in raw_origins.split(",") if o.strip()]

    app = FastAPI(title="metaforge", default_response_class=CanonicalJSONResponse,
                  openapi_url=None)
    app.state.registry = registry
    app.state.store = store
    app.state.gateway = gw
    app.add_middleware(CORSMiddleware, allow_origins=cors_origins,
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(MetaforgeError)
    async def handle_engine_error(_request, exc: MetaforgeError):
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request, exc: RequestValidationError):
        return _error_response(MetaforgeError("MALFORMED_JSON", str(exc)))

    if token:
        @app.middleware("http")
        async def require_token(request: Request, call_next):
            if request.url.path != "/v1/healthz" and request.method != "OPTIONS":
                supplied = request.headers.get("authorization", "")
                if supplied != f"Bearer {token}":
                    return _error_response(
                        MetaforgeError("UNAUTHORIZED", "missing or wrong bearer token"))
            return await call_next(request)

    @app.get("/v1/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/v1/templates")
    async def list_templates():
        return {"templates": [e.summary() for e in registry.list()]}

    @app.post("/v1/templates")
    async def register_template(request: Request, force: str | None = None):
        document = await _read_json(request)
        entry, created = registry.register(document, force=_as_flag(force))
        payload = {"id": entry.id, "fingerprint": entry.fingerprint}
        return CanonicalJSONResponse(payload, status_code=201 if created else 200)

    @app.get("/v1/search/authority")
    async def search_authority(source: str = "", q: str = "", limit: str = "10"):
        suggestions = gw.search_authority(source, q, _parse_limit(limit))
        return {"suggestions": [s.to_dict() for s in suggestions]}

    @app.get("/v1/search/ontology")
    async def search_ontology(acronym: str = "", q: str = "", limit: str = "10"):
        if not acronym:
            raise GatewayError("UNKNOWN_SOURCE_ACRONYM", "acronym parameter is required")
        spec = TermSourceSpec(SourceType.ONTOLOGY, acronym)
        suggestions = gw.search_ontology([spec], q, _parse_limit(limit))
        return {"suggestions": [s.to_dict() for s in suggestions]}

    @app.get("/v1/resolve/authority")
    async def resolve_authority(source: str = "", id: str = ""):
        return gw.resolve_identifier(source, id).to_dict()

    @app.get("/v1/instances/{instance_id}")
    async def get_instance(instance_id: str):
        stored = store.get(instance_id)
        return Response(content=stored.body, media_type="application/ld+json")

    @app.post("/v1/templates/{template_id:path}/render-plan")
    async def get_render_plan(template_id: str, request: Request):
        entry = registry.get(template_id)
        body = await _read_json(request) if await request.body() else {}
        mode = body.get("mode", "entry")
        language = body.get("language", "en")
        chain = language if isinstance(language, list) else [language]
        if body.get("instance") is not None:
            instance = parse_instance(entry.template, body["instance"])
        else:
            instance = new_instance(entry.template)
        plan = render_plan(entry.template, instance, mode, chain)
        return plan.to_dict()

    @app.post("/v1/templates/{template_id:path}/validate")
    async def post_validate(template_id: str, request: Request, strict: str | None = None):
        entry = registry.get(template_id)
        document = await _read_json(request)
        try:
            instance = parse_instance(entry.template, document)
            issues = validate_instance(entry.template, instance,
                                       strict=_as_flag(strict))
        except MetaforgeError as exc:
            if exc.code not in ("CONTEXT_MISMATCH", "FINGERPRINT_MISMATCH"):
                raise
            # issues are data, not transport errors
            return _issue_payload([ValidationIssue("error", "", exc.code, exc.message)])
        return _issue_payload(issues)

    @app.post("/v1/templates/{template_id:path}/quality-report")
    async def post_quality_report(template_id: str, request: Request):
        entry = registry.get(template_id)
        document = await _read_json(request)
        instance = parse_instance(entry.template, document)
        return generate_report(entry.template, instance).to_dict()

    @app.post("/v1/templates/{template_id:path}/serialize")
    async def post_serialize(template_id: str, request: Request):
        # Canonical serialize path: the embeddable editor emits these bytes.
        entry = registry.get(template_id)
        document = await _read_json(request)
        instance = parse_instance(entry.template, document)
        return serialize_jsonld(entry.template, instance, strict=False)

    @app.post("/v1/templates/{template_id:path}/instances")
    async def store_instance(template_id: str, request: Request, draft: str | None = None):
        entry = registry.get(template_id)
        raw = await request.body()
        document = await _read_json(request)
        is_draft = _as_flag(draft)
        try:
            instance = parse_instance(entry.template, document)
            issues = validate_instance(entry.template, instance, strict=True)
        except MetaforgeError as exc:
            if exc.code not in ("CONTEXT_MISMATCH", "FINGERPRINT_MISMATCH"):
                raise
            instance, issues = None, [ValidationIssue("error", "", exc.code, exc.message)]
        if not is_draft and (instance is None or has_errors(issues)):
            raise MetaforgeError("VALIDATION_FAILED",
                                 "instance does not validate strictly",
                                 issues=[x.to_dict() for x in issues
                                         if x.severity == "error"])
        stored = store.put(raw, entry.id, draft=is_draft)
        return CanonicalJSONResponse({"instanceId": stored.instance_id,
                                      "draft": stored.draft}, status_code=201)

    @app.get("/v1/templates/{template_id:path}")
    async def get_template(template_id: str):
        return registry.get(template_id).document

    return app


def _parse_limit(raw: str) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise MetaforgeError("MALFORMED_JSON",
                             f"limit must be an integer, got {raw!r}") from None
