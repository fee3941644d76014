"""HTTP service exposing networks and explanation operations.

Endpoints:

* ``POST /api/networks`` registers a network; ``text/plain`` bodies are
  parsed as BIF, JSON bodies as the native format.
* ``GET /api/networks`` lists registered networks.
* ``GET /api/networks/{id}`` returns the structure document (native JSON
  plus an ``arcs`` list); re-uploading it registers an equal network.
* ``POST /api/networks/{id}/query`` runs an operation; the body carries
  ``{"operation": ..., ...parameters}`` and the response is the same
  canonical envelope the CLI prints with ``--format json``.

The registry is in-memory and lives for the process; ``builtin:asia`` is
pre-registered. Queries never mutate networks, so concurrent reads need
no locking; registration is serialized.
"""

from __future__ import annotations

import datetime
import json
import threading
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .errors import (
    BifParseError,
    ImpossibleEvidenceError,
    ImpossibleExplanationError,
    JsonSchemaError,
    NetworkValidationError,
    QueryError,
    SearchSpaceError,
    VacuousExplanationError,
    XbnError,
)
from .formats import builtin_asia, network_from_document, network_to_document, parse_bif
from .jsonio import canonical_json
from .model import BayesianNetwork
from .operations import run_operation


@dataclass(frozen=True)
class _Entry:
    network: BayesianNetwork
    uploaded_at: str


class NetworkRegistry:
    """Process-lifetime store of immutable networks keyed by opaque ids."""

    def __init__(self):
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()
        self._counter = 0
        self.register(builtin_asia(), net_id="builtin:asia")

    def register(self, net: BayesianNetwork, net_id: str | None = None) -> str:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat()
        with self._lock:
            if net_id is None:
                self._counter += 1
                net_id = f"net-{self._counter}"
            self._entries[net_id] = _Entry(net, now)
        return net_id

    def get(self, net_id: str) -> _Entry | None:
        return self._entries.get(net_id)

    def list(self) -> dict[str, _Entry]:
        return dict(self._entries)


def _error_response(status: int, code: str, message: str, detail=None):
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _error_for(exc: Exception):
    if isinstance(exc, BifParseError):
        first = exc.diagnostics[0]
        return _error_response(
            400,
            "parse_error",
            str(exc),
            {"line": first.line, "column": first.column,
             "message": first.message},
        )
    if isinstance(exc, (JsonSchemaError, NetworkValidationError)):
        return _error_response(400, "invalid_network", str(exc))
    if isinstance(exc, ImpossibleEvidenceError):
        return _error_response(409, "impossible_evidence", str(exc))
    if isinstance(exc, SearchSpaceError):
        return _error_response(413, "guard_exceeded", str(exc))
    if isinstance(
        exc, (QueryError, ImpossibleExplanationError, VacuousExplanationError)
    ):
        return _error_response(422, "invalid_parameters", str(exc))
    if isinstance(exc, XbnError):
        return _error_response(500, "internal_error", str(exc))
    raise exc


def create_app(
    registry: NetworkRegistry | None = None, ui_dir: str | None = None
) -> FastAPI:
    """Build the application; ``ui_dir`` optionally mounts a built
    frontend at ``/ui`` (static files only, the API is unaffected)."""
    app = FastAPI(title="xbn", docs_url=None, redoc_url=None)
    reg = registry if registry is not None else NetworkRegistry()
    app.state.registry = reg
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.post("/api/networks", status_code=201)
    async def register_network(request: Request):
        body = await request.body()
        content_type = request.headers.get("content-type", "")
        text = body.decode("utf-8", errors="replace")
        try:
            if "json" in content_type:
                net = network_from_document(json.loads(text))
            else:
                net = parse_bif(text)
        except json.JSONDecodeError as exc:
            return _error_response(400, "parse_error", f"invalid JSON: {exc}")
        except Exception as exc:
            return _error_for(exc)
        net_id = reg.register(net)
        return JSONResponse(status_code=201, content={"id": net_id, "name": net.name})

    @app.get("/api/networks")
    async def list_networks():
        entries = reg.list()
        return {
            "networks": [
                {
                    "id": net_id,
                    "name": entry.network.name,
                    "variables": len(entry.network.variables),
                    "uploaded_at": entry.uploaded_at,
                }
                for net_id, entry in entries.items()
            ]
        }

    @app.get("/api/networks/{net_id}")
    async def get_network(net_id: str):
        entry = reg.get(net_id)
        if entry is None:
            return _error_response(404, "unknown_network", f"no network '{net_id}'")
        doc = network_to_document(entry.network)
        doc["id"] = net_id
        doc["arcs"] = [
            {"from": parent, "to": child}
            for parent, child in entry.network.arcs()
        ]
        return doc

    @app.post("/api/networks/{net_id}/query")
    async def dispatch_query(net_id: str, request: Request):
        entry = reg.get(net_id)
        if entry is None:
            return _error_response(404, "unknown_network", f"no network '{net_id}'")
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error_response(422, "invalid_parameters",
                                   f"invalid JSON body: {exc}")
        if not isinstance(body, dict) or "operation" not in body:
            return _error_response(
                422, "invalid_parameters", "body must contain 'operation'"
            )
        operation = body.pop("operation")
        try:
            envelope = run_operation(entry.network, net_id, operation, body)
        except Exception as exc:
            return _error_for(exc)
        return Response(
            content=canonical_json(envelope), media_type="application/json"
        )

    return app


app = create_app()
