"""Command line interface.

Exit codes: 0 success, 2 validation or schema failure, 3 numeric domain
errors (parameter outside the real branch and friends).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .analysis import first_order_flex, non_expansion_check, tube_check
from .construction import ValidationReport
from .deformation import state_mesh, sweep as sweep_states
from .errors import (
    ComplexBranch,
    DegenerateK,
    IndeterminatePattern,
    NotALimit,
    NotFlat,
    NumericallyTangent,
    OutOfDomain,
    PhedraError,
    PointAtInfinity,
    RigidPattern,
    SchemaError,
    ScissorRequiresAllPlus,
)
from .model_io import write_model, write_obj
from .pipeline import load

NUMERIC_ERRORS = (ComplexBranch, OutOfDomain, PointAtInfinity,
                  NumericallyTangent, DegenerateK, NotALimit)


def _num(x) -> str:
    return f"{x:.9g}"


def _print_report(report: ValidationReport) -> None:
    for v in report.violations:
        where = f" [{v.index}]" if v.index is not None else ""
        print(f"violation {v.code}{where}: {v.message}")
    for w in report.warnings:
        print(f"warning {w.code}: {w.message}")


def _load_or_exit(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)
    try:
        bundle = load(text)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    if isinstance(bundle, ValidationReport):
        _print_report(bundle)
        raise SystemExit(2)
    return bundle


def cmd_validate(args) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 2
    from .model_io import parse_model

    try:
        parsed = parse_model(text)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    if isinstance(parsed, ValidationReport):
        _print_report(parsed)
        return 2
    from .construction import validate

    report = validate(parsed, allow_flat=True)
    _print_report(report)
    print("ok")
    return 0


def cmd_construct(args) -> int:
    bundle = _load_or_exit(args.file)
    mesh = bundle.mesh
    if args.axial:
        from dataclasses import replace

        from .construction import TranslationLedger, deaxialize

        model = replace(bundle.model,
                        ledger=TranslationLedger.empty(bundle.model.m))
        mesh = deaxialize(model)
    write_obj(mesh, args.output)
    print(f"classification = {bundle.classification}")
    print(f"faces = {len(mesh.faces)}")
    print(f"max_planarity_defect = {_num(mesh.planarity_defects.max())}")
    print(f"wrote {args.output}")
    return 0


def cmd_limits(args) -> int:
    bundle = _load_or_exit(args.file)
    iv = bundle.interval_for(args.flip_strip)
    print(f"t_* = {_num(iv.t_star)}")
    print(f"t_lambda = {_num(iv.t_lambda)}")
    print(f"t_mu = {_num(iv.t_mu)}")
    print(f"hard_domain = [{_num(iv.hard[0])}, {_num(iv.hard[1])}]")
    for lim in iv.limits:
        owners = ",".join(str(o) for o in lim.owners) or "-"
        print(f"limit t = {_num(lim.t)}  kind = {lim.kind}  strips = {owners}")
    if iv.zero_length:
        print("diagnostic: ZeroLengthInterval (a limit coincides with t_*;"
              " developed/flat configuration)")
    return 0


def cmd_deform(args) -> int:
    bundle = _load_or_exit(args.file)
    state = bundle.state_at(args.t, args.flip_strip)
    write_obj(state_mesh(state, bundle.mesh.classification), args.output)
    diag = bundle.diagnostics(state)
    print(f"t = {_num(args.t)}")
    print(f"max_isometry_deviation = {_num(diag['max_isometry_deviation'])}")
    print(f"max_planarity_defect = {_num(diag['max_planarity_defect'])}")
    print(f"wrote {args.output}")
    return 0


def cmd_sweep(args) -> int:
    bundle = _load_or_exit(args.file)
    branch = bundle.branch_for(args.flip_strip)
    interval = bundle.interval_for(args.flip_strip)
    states = sweep_states(bundle.plan, branch, args.frames, interval)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    archive = {"branch": branch.tolist(), "frames": []}
    for k, st in enumerate(states):
        name = f"frame_{k:03d}.obj"
        write_obj(state_mesh(st, bundle.mesh.classification), outdir / name)
        diag = bundle.diagnostics(st)
        archive["frames"].append({
            "t": st.t,
            "obj": name,
            "max_isometry_deviation": diag["max_isometry_deviation"],
            "max_planarity_defect": diag["max_planarity_defect"],
        })
    (outdir / "frames.json").write_text(json.dumps(archive, indent=2) + "\n")
    print(f"wrote {len(states)} frames to {outdir}")
    return 0


def cmd_flatcheck(args) -> int:
    bundle = _load_or_exit(args.file)
    try:
        field = first_order_flex(bundle.model)
    except NotFlat as exc:
        print(f"error NotFlat: {exc}", file=sys.stderr)
        return 2
    except RigidPattern:
        print("verdict = rigid (no infinitesimal motion)")
        return 0
    except IndeterminatePattern as exc:
        print(f"verdict = indeterminate (motion space dimension {exc.nullity})")
        return 0
    verdict = non_expansion_check(field, bundle.model)
    print(f"verdict = {verdict.verdict}")
    print(f"normalization = {field.normalization_tag}")
    print("apex_rates = " + " ".join(_num(v) for v in field.apex_rates))
    rates = verdict.coupling_rates
    for i in range(rates.shape[0]):
        row = " ".join(_num(v) for v in rates[i])
        print(f"coupling_rates[{i}] = {row}")
    return 0


def cmd_tube(args) -> int:
    bundle = _load_or_exit(args.file)
    rep = tube_check(bundle.model, bundle.plan, bundle.interval)
    print(f"closed = {str(rep.closed).lower()}")
    print(f"class = {rep.tube_class}")
    print(f"closure_error = {_num(rep.closure_error)}")
    if rep.sampled_max_error is not None:
        print(f"sampled_max_error = {_num(rep.sampled_max_error)}")
    print(f"symmetry_ok = {str(rep.symmetry_ok).lower()}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phedra",
        description="Construct, flex and analyse planar-quad surfaces "
                    "controlled by three polylines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file against all input rules")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("construct", help="build the quad mesh and export OBJ")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--axial", action="store_true",
                   help="export the axial configuration instead of the general one")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("limits", help="print the flexion interval and all limits")
    p.add_argument("file")
    p.add_argument("--flip-strip", type=int, action="append", default=[])
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("deform", help="evaluate the flex at a parameter and export OBJ")
    p.add_argument("file")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--flip-strip", type=int, action="append", default=[])
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("sweep", help="export an animation frame sequence")
    p.add_argument("file")
    p.add_argument("--frames", type=int, default=24)
    p.add_argument("--out", required=True)
    p.add_argument("--flip-strip", type=int, action="append", default=[])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("flatcheck", help="first-order flexibility of a developed pattern")
    p.add_argument("file")
    p.set_defaults(func=cmd_flatcheck)

    p = sub.add_parser("tube", help="closure and classification of the column loop")
    p.add_argument("file")
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("serve", help="run the local JSON service")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("PHEDRA_PORT", "8787")))
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ScissorRequiresAllPlus as exc:
        print(f"validation error ScissorRequiresAllPlus: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numeric error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except PhedraError as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
