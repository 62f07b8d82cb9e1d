"""Local JSON service backing the interactive designer.

Models are stored in memory under opaque ids; every GET is pure, branch
state travels as an explicit flip list, so responses are reproducible and
cacheable by (id, t, flips).

Status codes: 400 schema errors, 422 validation failures (and analysis
preconditions), 409 numeric-domain errors, 404 unknown ids.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .analysis import first_order_flex, non_expansion_check, tube_check
from .construction import ValidationReport
from .deformation import state_mesh, sweep as sweep_states
from .errors import (
    ComplexBranch,
    IndeterminatePattern,
    NotALimit,
    NotFlat,
    NumericallyTangent,
    OutOfDomain,
    PhedraError,
    PointAtInfinity,
    RigidPattern,
    SchemaError,
)
from .model_io import parse_model
from .pipeline import ModelBundle, assemble

NUMERIC_ERRORS = (ComplexBranch, OutOfDomain, PointAtInfinity,
                  NumericallyTangent, NotALimit)


def _ok(data, status=200):
    return JSONResponse({"ok": True, "data": data}, status_code=status)


def _err(code, message, status, details=None):
    body = {"ok": False, "error": {"code": code, "message": message}}
    if details is not None:
        body["error"]["details"] = details
    return JSONResponse(body, status_code=status)


def _parse_flips(raw: str | None):
    if not raw:
        return ()
    try:
        return tuple(int(v) for v in raw.split(",") if v != "")
    except ValueError:
        raise SchemaError("flip list must be comma-separated strip indices", "flip")


def _interval_payload(bundle: ModelBundle, flips=()):
    return bundle.interval_for(flips).to_dict()


def _mesh_payload(bundle: ModelBundle, state):
    mesh = state_mesh(state, bundle.mesh.classification)
    return {
        "t": state.t,
        "vertices": mesh.flat_vertices().tolist(),
        "grid_shape": [int(v) for v in state.vertices.shape[:2]],
        "faces": mesh.faces.tolist(),
        "diagnostics": bundle.diagnostics(state),
        "linkage": {
            "apex_z": state.apex_z.tolist(),
            "columns": state.chart_rz().tolist(),
        },
    }


def create_app() -> FastAPI:
    app = FastAPI(title="phedra service")
    store: dict[str, ModelBundle] = {}
    lock = threading.Lock()

    def bundle_or_none(model_id: str):
        with lock:
            return store.get(model_id)

    @app.exception_handler(PhedraError)
    async def on_error(request: Request, exc: PhedraError):
        if isinstance(exc, SchemaError):
            return _err("SchemaError", str(exc), 400, {"path": exc.path})
        if isinstance(exc, NUMERIC_ERRORS):
            details = {}
            if isinstance(exc, ComplexBranch):
                details = {"strip": exc.strip, "t": exc.t,
                           "discriminant": exc.discriminant}
            return _err(type(exc).__name__, str(exc), 409, details or None)
        return _err(type(exc).__name__, str(exc), 422)

    @app.post("/api/models")
    async def create_model(request: Request):
        text = (await request.body()).decode("utf-8")
        parsed = parse_model(text)
        if isinstance(parsed, ValidationReport):
            return _err("ValidationFailed", "model violates input assumptions",
                        422, parsed.to_dict())
        bundle = assemble(parsed)
        model_id = uuid.uuid4().hex[:12]
        with lock:
            store[model_id] = bundle
        return _ok({
            "id": model_id,
            "report": bundle.report.to_dict(),
            "classification": bundle.classification,
            "t_star": bundle.plan.t_star,
            "interval": _interval_payload(bundle),
            "strips": bundle.plan.m,
        }, status=201)

    @app.get("/api/models/{model_id}/mesh")
    async def get_mesh(model_id: str, t: float | None = None,
                       flip: str | None = None):
        bundle = bundle_or_none(model_id)
        if bundle is None:
            return _err("UnknownModel", f"no model {model_id}", 404)
        flips = _parse_flips(flip)
        t_val = bundle.plan.t_star if t is None else float(t)
        state = bundle.state_at(t_val, flips)
        return _ok(_mesh_payload(bundle, state))

    @app.get("/api/models/{model_id}/limits")
    async def get_limits(model_id: str, flip: str | None = None):
        bundle = bundle_or_none(model_id)
        if bundle is None:
            return _err("UnknownModel", f"no model {model_id}", 404)
        return _ok(_interval_payload(bundle, _parse_flips(flip)))

    @app.get("/api/models/{model_id}/frames")
    async def get_frames(model_id: str, count: int = 16,
                         flip: str | None = None):
        bundle = bundle_or_none(model_id)
        if bundle is None:
            return _err("UnknownModel", f"no model {model_id}", 404)
        flips = _parse_flips(flip)
        branch = bundle.branch_for(flips)
        interval = bundle.interval_for(flips)
        states = sweep_states(bundle.plan, branch, max(2, int(count)), interval)
        return _ok({
            "branch": branch.tolist(),
            "frames": [_mesh_payload(bundle, st) for st in states],
        })

    @app.get("/api/models/{model_id}/flatcheck")
    async def get_flatcheck(model_id: str):
        bundle = bundle_or_none(model_id)
        if bundle is None:
            return _err("UnknownModel", f"no model {model_id}", 404)
        try:
            field = first_order_flex(bundle.model)
        except RigidPattern as exc:
            return _ok({"verdict": "rigid", "detail": str(exc)})
        except IndeterminatePattern as exc:
            return _ok({"verdict": "indeterminate", "nullity": exc.nullity})
        verdict = non_expansion_check(field, bundle.model)
        from .analysis import flat_chart

        return _ok({
            "verdict": verdict.verdict,
            "coupling_rates": verdict.coupling_rates.tolist(),
            "apex_rates": field.apex_rates.tolist(),
            "velocities": field.velocities.tolist(),
            "chart": flat_chart(bundle.model).tolist(),
            "apex_z": bundle.model.apex_z.tolist(),
            "normalization": field.normalization_tag,
        })

    @app.get("/api/models/{model_id}/tube")
    async def get_tube(model_id: str):
        bundle = bundle_or_none(model_id)
        if bundle is None:
            return _err("UnknownModel", f"no model {model_id}", 404)
        return _ok(tube_check(bundle.model, bundle.plan, bundle.interval).to_dict())

    @app.delete("/api/models/{model_id}")
    async def delete_model(model_id: str):
        with lock:
            present = store.pop(model_id, None)
        if present is None:
            return _err("UnknownModel", f"no model {model_id}", 404)
        return _ok({"deleted": model_id})

    return app
