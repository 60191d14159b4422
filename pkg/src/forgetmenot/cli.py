"""Command-line front door.

Subcommands: estimate, sweep, scenario, calibrate, assemble, validate,
serve.  Results go to stdout (or ``--out``); diagnostics go to stderr.
Exit codes: 0 success, 1 domain error, 2 usage error (bad flags or a
missing input file).  Any file argument accepts ``preset:<name>`` to use
an embedded preset; ``FORGETMENOT_CONFIG_DIR`` prepends a directory of
user presets.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, presets
from .calibration import (
    BaselineMode,
    calibrate_from_records,
    parse_records_csv,
    parse_site,
)
from .engine import breakdown_from_json, compare_to_measured
from .errors import EmissionModelError
from .profile import profile_to_json
from .reporting import render_csv, render_json
from .usage import SourceId
from .workflows import (
    assemble_workflow,
    estimate_workflow,
    resolve_profile,
    scenario_workflow,
    sweep_workflow,
)


class UsageError(Exception):
    """Bad invocation (missing file, malformed flag value): exit code 2."""


def _read_text(value: str, kind: str) -> str:
    """Fetch an input by path or preset reference."""
    if presets.is_preset_ref(value):
        name = value[len(presets.PRESET_PREFIX):]
        if kind == "records":
            return presets.load_preset_text(kind, name)
        return json.dumps(presets.load_preset_json(kind, name))
    path = Path(value)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"{kind} file not found: {value}")
    except OSError as exc:
        raise UsageError(f"cannot read {kind} file {value}: {exc}")


def _read_json(value: str, kind: str):
    text = _read_text(value, kind)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise EmissionModelError(f"{kind} file {value}: invalid JSON ({exc})")


def _emit(payload_text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload_text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(payload_text)


def _render(report, fmt: str) -> str:
    return render_csv(report) if fmt == "csv" else render_json(report)


def _comma_floats(raw: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected a comma-separated list of numbers, got {raw!r}")


def _cmd_estimate(args) -> int:
    spec_doc = _read_json(args.spec, "spec")
    profile_doc = _read_json(args.profile, "profile")
    breakdown = estimate_workflow(spec_doc, profile_doc, args.horizon)
    _emit(_render(breakdown, args.format), args.out)
    if args.plot:
        from . import figures

        figures.render_breakdown(breakdown, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    spec_doc = _read_json(args.spec, "spec")
    profile_doc = _read_json(args.profile, "profile")
    specs = None
    if args.specs:
        specs = _read_json(args.specs, "spec")
        if not isinstance(specs, list):
            raise EmissionModelError("--specs file must hold a JSON list of specs")
    values = _comma_floats(args.values, "--values") if args.values else None
    trend = sweep_workflow(
        spec_doc,
        profile_doc,
        axis=args.axis,
        values=values,
        specs=specs,
        normalization=args.normalize,
        horizon=args.horizon,
    )
    _emit(_render(trend, args.format), args.out)
    if args.plot:
        from . import figures

        figures.render_sweep(trend, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def _cmd_scenario(args) -> int:
    spec_doc = _read_json(args.spec, "spec")
    profile_doc = _read_json(args.profile, "profile")
    levers_doc = _read_json(args.levers, "levers")
    report = scenario_workflow(spec_doc, profile_doc, levers_doc, args.horizon)
    _emit(render_json(report), args.out)
    if args.plot:
        from . import figures

        figures.render_scenario(report, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def _cmd_calibrate(args) -> int:
    records = parse_records_csv(_read_text(args.records, "records"))
    if not records:
        raise EmissionModelError("no records")
    site = parse_site(_read_json(args.site, "site"))
    template = resolve_profile(_read_json(args.template, "profile"))
    result = calibrate_from_records(
        records,
        site,
        template,
        radius_miles=args.radius_miles,
        mode=BaselineMode(args.baseline_mode),
    )
    _emit(render_json(result), args.out)
    for message in result.warnings:
        print(f"warning: {message}", file=sys.stderr)
    if args.emit_profile:
        filled = result.filled_profile(template, name=f"{template.name}-calibrated")
        Path(args.emit_profile).write_text(
            json.dumps(profile_to_json(filled), indent=2) + "\n", encoding="utf-8"
        )
        print(f"filled profile written to {args.emit_profile}", file=sys.stderr)
    return 0


def _cmd_assemble(args) -> int:
    catalog_doc = _read_json(args.catalog, "catalog")
    horizons = [h.strip() for h in args.horizons.split(",")] if args.horizons else None
    payload, report = assemble_workflow(
        catalog_doc,
        args.server_class,
        horizon=args.horizon,
        horizons=horizons,
        pareto=args.pareto,
        max_workers=args.workers,
    )
    if args.format == "csv":
        if horizons:
            raise UsageError("--format csv is not available with --horizons")
        _emit(render_csv(report), args.out)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    if args.plot:
        if horizons:
            raise UsageError("--plot is not available with --horizons")
        from . import figures

        figures.render_ranking(report, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    breakdown = breakdown_from_json(_read_json(args.breakdown, "breakdown"))
    measured_doc = _read_json(args.measured, "measured")
    if not isinstance(measured_doc, dict):
        raise EmissionModelError("measured file must hold a JSON object of source -> gCO2eq")
    measured = {
        SourceId.parse(name): float(value) for name, value in measured_doc.items()
    }
    report = compare_to_measured(breakdown, measured)
    _emit(render_json(report), args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cors_dev=args.cors_dev)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forgetmenot",
        description="Fluorinated-compound emission modeling for hardware manufacturing.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, formats=("json", "csv"), plot=True):
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--out", help="write the payload to this path instead of stdout")
        if plot:
            p.add_argument("--plot", help="also render a figure to this image path")

    p = sub.add_parser("estimate", help="per-source emission breakdown for one spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--horizon", choices=["y20", "y100", "y500"])
    io_flags(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("sweep", help="emission trend along node size, capacity, or a spec list")
    p.add_argument("--spec", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--axis", required=True, choices=["node_nm", "capacity_tb", "spec_list"])
    p.add_argument("--values", help="comma-separated axis values (node/capacity axes)")
    p.add_argument("--specs", help="JSON file with a list of specs (spec_list axis)")
    p.add_argument("--normalize", choices=["none", "per_gb", "per_tb"], default="none")
    p.add_argument("--horizon", choices=["y20", "y100", "y500"])
    io_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("scenario", help="apply what-if levers and report the deltas")
    p.add_argument("--spec", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--levers", required=True)
    p.add_argument("--horizon", choices=["y20", "y100", "y500"])
    p.add_argument("--out")
    p.add_argument("--plot")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("calibrate", help="fit base coefficients from release records")
    p.add_argument("--records", required=True, help="CSV: lat,lon,year,compound,mass_g")
    p.add_argument("--site", required=True, help="JSON facility site document")
    p.add_argument("--template", required=True, help="profile template with null coefficients")
    p.add_argument("--radius-miles", type=float, default=10.0)
    p.add_argument(
        "--baseline-mode",
        choices=[m.value for m in BaselineMode],
        default=BaselineMode.MEAN_PER_RECORD.value,
    )
    p.add_argument("--out")
    p.add_argument("--emit-profile", help="write the filled profile JSON to this path")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("assemble", help="rank CPU/DRAM/storage assemblies from a catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument(
        "--class",
        dest="server_class",
        default="general_purpose",
        help="general_purpose, compute_optimized, memory_optimized, or storage_optimized",
    )
    p.add_argument("--horizon", choices=["y20", "y100", "y500"])
    p.add_argument("--horizons", help="comma-separated horizons for a rank-stability report")
    p.add_argument("--pareto", action="store_true", help="include the Pareto front")
    p.add_argument("--workers", type=int, help="parallel component evaluations")
    io_flags(p)
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("validate", help="compare a breakdown against measured values")
    p.add_argument("--breakdown", required=True)
    p.add_argument("--measured", required=True, help="JSON object of source -> gCO2eq")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8086)
    p.add_argument("--cors-dev", action="store_true", help="permissive CORS for UI development")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmissionModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
