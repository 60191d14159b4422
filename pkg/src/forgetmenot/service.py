"""Stateless HTTP/JSON API over the modeling engine.

Every response is an envelope ``{"ok": bool, "data": ...}`` or
``{"ok": false, "error": {code, message, detail}}`` with exactly one of
``data``/``error`` present.  Successful envelopes also carry a content
hash of the data payload for client-side caching.  Handlers share only
immutable presets, so concurrent requests need no locks and any request
sequence behaves as if each request ran alone.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, presets
from .errors import (
    EmissionModelError,
    SchemaError,
    UnknownPresetError,
)
from .workflows import (
    assemble_workflow,
    estimate_workflow,
    scenario_workflow,
    sweep_workflow,
)


def _ok(data) -> JSONResponse:
    return JSONResponse(
        {"ok": True, "data": data, "content_hash": presets.content_hash(data)}
    )


def _error(status: int, code: str, message: str, detail: str | None = None) -> JSONResponse:
    return JSONResponse(
        {"ok": False, "error": {"code": code, "message": message, "detail": detail}},
        status_code=status,
    )


def _error_for(exc: EmissionModelError) -> JSONResponse:
    if isinstance(exc, UnknownPresetError):
        return _error(404, "unknown_preset", str(exc))
    if isinstance(exc, SchemaError):
        return _error(400, "schema", str(exc))
    return _error(422, "domain", str(exc))


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except json.JSONDecodeError as exc:
        raise SchemaError(f"request body is not valid JSON: {exc}")
    if not isinstance(body, dict):
        raise SchemaError("request body must be a JSON object")
    return body


def _require(body: dict, *keys: str) -> None:
    for key in keys:
        if key not in body:
            raise SchemaError(f"body: {key!r} is required")


def _reject_unknown(body: dict, allowed: set[str]) -> None:
    for key in body:
        if key not in allowed:
            raise SchemaError(f"body: unknown key {key!r}")


def _spec_input(body: dict):
    return body.get("spec_ref", body.get("spec"))


def _profile_input(body: dict):
    return body.get("profile_ref", body.get("profile"))


def create_app(cors_dev: bool = False, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="forgetmenot", version=__version__, docs_url=None, redoc_url=None)

    if cors_dev:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(EmissionModelError)
    async def _domain_handler(_request, exc: EmissionModelError):
        return _error_for(exc)

    @app.post("/v1/estimate")
    async def estimate(request: Request):
        body = await _json_body(request)
        _reject_unknown(body, {"spec", "spec_ref", "profile", "profile_ref", "horizon"})
        if _spec_input(body) is None or _profile_input(body) is None:
            raise SchemaError("body: 'spec' (or 'spec_ref') and 'profile' (or 'profile_ref') are required")
        breakdown = estimate_workflow(
            _spec_input(body), _profile_input(body), body.get("horizon")
        )
        return _ok(breakdown.to_json_dict())

    @app.post("/v1/scenario")
    async def scenario(request: Request):
        body = await _json_body(request)
        _reject_unknown(
            body, {"spec", "spec_ref", "profile", "profile_ref", "levers", "horizon"}
        )
        if _spec_input(body) is None or _profile_input(body) is None:
            raise SchemaError("body: 'spec' (or 'spec_ref') and 'profile' (or 'profile_ref') are required")
        _require(body, "levers")
        report = scenario_workflow(
            _spec_input(body), _profile_input(body), body["levers"], body.get("horizon")
        )
        return _ok(report.to_json_dict())

    @app.post("/v1/sweep")
    async def run_sweep(request: Request):
        body = await _json_body(request)
        _reject_unknown(
            body,
            {
                "spec",
                "spec_ref",
                "profile",
                "profile_ref",
                "axis",
                "values",
                "specs",
                "normalization",
                "horizon",
            },
        )
        if _spec_input(body) is None or _profile_input(body) is None:
            raise SchemaError("body: 'spec' (or 'spec_ref') and 'profile' (or 'profile_ref') are required")
        _require(body, "axis")
        trend = sweep_workflow(
            _spec_input(body),
            _profile_input(body),
            axis=str(body["axis"]),
            values=body.get("values"),
            specs=body.get("specs"),
            normalization=str(body.get("normalization", "none")),
            horizon=body.get("horizon"),
        )
        return _ok(trend.to_json_dict())

    @app.post("/v1/assemble")
    async def assemble(request: Request):
        body = await _json_body(request)
        _reject_unknown(
            body,
            {"catalog", "catalog_ref", "class", "horizon", "horizons", "pareto"},
        )
        catalog_input = body.get("catalog_ref", body.get("catalog"))
        if catalog_input is None:
            raise SchemaError("body: 'catalog' (or 'catalog_ref') is required")
        payload, _report = assemble_workflow(
            catalog_input,
            str(body.get("class", "general_purpose")),
            horizon=body.get("horizon"),
            horizons=body.get("horizons"),
            pareto=bool(body.get("pareto", False)),
        )
        return _ok(payload)

    @app.get("/v1/presets")
    async def list_presets():
        return _ok({"presets": presets.preset_index()})

    @app.get("/v1/presets/{kind}/{name}")
    async def preset_body(kind: str, name: str):
        if kind == "records":
            return _ok({"kind": kind, "name": name, "csv": presets.load_preset_text(kind, name)})
        return _ok({"kind": kind, "name": name, "body": presets.load_preset_json(kind, name)})

    @app.get("/v1/health")
    async def health():
        return _ok({"status": "ok", "version": __version__})

    ui_path = Path(ui_dir) if ui_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_path.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app
