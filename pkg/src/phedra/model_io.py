"""Model file parsing/serialization and OBJ export.

The model file is JSON with three arrays.  Directions may be given as
points ``[x, y, z]`` or as ``{"angle": degrees}`` shorthand (the horizontal
direction angle measured from +x).  Interior apexes carry a mandatory sign,
the two end apexes must not.

    {
      "trajectory": [[2.0, 0.0, 0.0], ...],
      "directions": [[3.0, 0.0, 0.0], {"angle": 60.0}, ...],
      "apexes": [{"z": -1.0}, {"z": 2.0, "sign": "+"}, {"z": 4.0}],
      "options": {"normalize": true, "samples": 512}
    }
"""

from __future__ import annotations

import json
import math

import numpy as np

from .construction import (ControlPolylines, Options, ValidationReport,
                           normalize_frame, validate)
from .errors import DegenerateFrame, SchemaError
from .tolerances import DEFAULT

_SIGN_IN = {"+": +1, "-": -1, "−": -1}
_SIGN_OUT = {+1: "+", -1: "-"}


def _need(cond, message, path):
    if not cond:
        raise SchemaError(message, path)


def _as_point(entry, path):
    _need(isinstance(entry, (list, tuple)) and len(entry) == 3,
          "expected [x, y, z]", path)
    try:
        return [float(v) for v in entry]
    except (TypeError, ValueError):
        raise SchemaError("coordinates must be numbers", path)


def parse_model(text: str):
    """Parse a model file.

    Returns ControlPolylines when the content passes construction-level
    validation, otherwise the ValidationReport.  Structural problems raise
    SchemaError with the JSON path of the offending entry.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", "$")
    _need(isinstance(doc, dict), "top level must be an object", "$")
    for key in ("trajectory", "directions", "apexes"):
        _need(key in doc, f"missing required key '{key}'", "$")
        _need(isinstance(doc[key], list), f"'{key}' must be an array", key)

    trajectory = [_as_point(e, f"trajectory[{i}]") for i, e in enumerate(doc["trajectory"])]
    _need(len(trajectory) >= 2, "need at least two trajectory vertices", "trajectory")
    _need(len(doc["directions"]) == len(trajectory),
          "directions must match trajectory in length", "directions")

    directions = []
    for i, entry in enumerate(doc["directions"]):
        path = f"directions[{i}]"
        if isinstance(entry, dict):
            _need(set(entry) == {"angle"}, "direction object takes only 'angle'", path)
            try:
                ang = math.radians(float(entry["angle"]))
            except (TypeError, ValueError):
                raise SchemaError("'angle' must be a number (degrees)", path)
            v = trajectory[i]
            directions.append([v[0] + math.cos(ang), v[1] + math.sin(ang), v[2]])
        else:
            directions.append(_as_point(entry, path))

    apexes = doc["apexes"]
    _need(len(apexes) >= 3, "need at least three apexes", "apexes")
    apex_z, apex_signs = [], []
    last = len(apexes) - 1
    for j, entry in enumerate(apexes):
        path = f"apexes[{j}]"
        _need(isinstance(entry, dict) and "z" in entry, "expected {z, sign?}", path)
        _need(set(entry) <= {"z", "sign"}, "unknown apex keys", path)
        try:
            apex_z.append(float(entry["z"]))
        except (TypeError, ValueError):
            raise SchemaError("'z' must be a number", path)
        sign = entry.get("sign")
        if j in (0, last):
            _need(sign is None, "end apexes carry no sign", f"{path}.sign")
            apex_signs.append(0)
        else:
            _need(sign in _SIGN_IN, "interior apexes need sign '+' or '-'", f"{path}.sign")
            apex_signs.append(_SIGN_IN[sign])

    opts = doc.get("options", {})
    _need(isinstance(opts, dict), "'options' must be an object", "options")
    _need(set(opts) <= {"normalize", "samples", "tolerances"},
          "unknown option keys", "options")
    tolerances = DEFAULT
    overrides = opts.get("tolerances", {})
    _need(isinstance(overrides, dict), "'tolerances' must be an object", "options.tolerances")
    if overrides:
        known = set(vars(DEFAULT))
        _need(set(overrides) <= known, "unknown tolerance keys", "options.tolerances")
        tolerances = DEFAULT.with_(**{k: float(v) if k != "samples" else int(v)
                                      for k, v in overrides.items()})
    options = Options(
        normalize=bool(opts.get("normalize", True)),
        samples=int(opts.get("samples", DEFAULT.samples)),
        tolerances=tolerances,
    )

    cp = ControlPolylines(
        trajectory=np.array(trajectory),
        directions=np.array(directions),
        apex_z=np.array(apex_z),
        apex_signs=np.array(apex_signs),
        options=options,
    )
    if options.normalize:
        try:
            cp, _ = normalize_frame(cp)
        except DegenerateFrame as exc:
            report = ValidationReport()
            report.add("DegenerateFrame", str(exc))
            return report
    report = validate(cp, allow_flat=True)
    if not report.ok:
        return report
    return cp


def write_model(cp: ControlPolylines) -> str:
    """Canonical JSON form; parse(write(cp)) reproduces cp bit for bit."""
    doc = {
        "trajectory": [[float(v) for v in row] for row in cp.trajectory],
        "directions": [[float(v) for v in row] for row in cp.directions],
        "apexes": [
            {"z": float(z)} if s == 0 else {"z": float(z), "sign": _SIGN_OUT[int(s)]}
            for z, s in zip(cp.apex_z, cp.apex_signs)
        ],
        "options": {"normalize": cp.options.normalize, "samples": cp.options.samples},
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# OBJ export


def _fmt(v: float) -> str:
    s = f"{v:.9f}"
    if float(s) == 0.0:
        s = f"{0.0:.9f}"
    return s


def obj_string(vertices: np.ndarray, faces) -> str:
    """Deterministic OBJ text.

    Vertices are written in the given order at fixed precision.  Quads with
    coincident corner positions collapse to triangles; fully degenerate
    faces are dropped.
    """
    lines = []
    for v in vertices:
        lines.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    for face in faces:
        kept = []
        for idx in face:
            if kept and np.allclose(vertices[idx], vertices[kept[-1]], atol=1e-12):
                continue
            kept.append(int(idx))
        while len(kept) > 1 and np.allclose(
            vertices[kept[0]], vertices[kept[-1]], atol=1e-12
        ):
            kept.pop()
        if len(kept) < 3:
            continue
        lines.append("f " + " ".join(str(k + 1) for k in kept))
    return "\n".join(lines) + "\n"


def write_obj(mesh, path) -> None:
    """Write a quad-grid mesh to an OBJ file.

    Grid order is row-major: the low boundary row, the grown rows, then the
    high boundary row.
    """
    with open(path, "w") as fh:
        fh.write(obj_string(mesh.flat_vertices(), mesh.faces))
