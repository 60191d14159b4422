"""Input resolution and payload assembly shared by the CLI and the service.

Both front doors translate their inputs into the same calls here, which is
what guarantees value-equal JSON payloads between ``estimate`` on the
command line and ``POST /v1/estimate`` (and likewise for scenario,
assemble, and sweep).
"""

from __future__ import annotations

from typing import Mapping, Sequence

from . import presets
from .catalog import (
    Catalog,
    RankReport,
    enumerate_assemblies,
    pareto_front,
    parse_catalog,
    rank_assemblies,
    rank_stability,
    server_class,
)
from .engine import EmissionBreakdown, total_emission
from .errors import SchemaError
from .geometry import HardwareSpec, parse_spec
from .profile import FabProfile, parse_profile
from .reporting import Normalization, SweepAxis, TrendSweep, sweep
from .scenario import ScenarioReport, parse_levers, run_scenario
from .units import GwpHorizon


def resolve_profile(value) -> FabProfile:
    """Accept an inline profile document or a preset name."""
    if isinstance(value, str):
        return parse_profile(presets.load_preset_json("profile", value))
    if isinstance(value, Mapping):
        return parse_profile(value)
    raise SchemaError("profile: expected an object or a preset name")


def resolve_spec(value) -> HardwareSpec:
    if isinstance(value, str):
        return parse_spec(presets.load_preset_json("spec", value))
    if isinstance(value, Mapping):
        return parse_spec(value)
    raise SchemaError("spec: expected an object or a preset name")


def resolve_catalog(value) -> Catalog:
    if isinstance(value, str):
        return parse_catalog(presets.load_preset_json("catalog", value))
    if isinstance(value, Mapping):
        return parse_catalog(value)
    raise SchemaError("catalog: expected an object or a preset name")


def resolve_horizon(value: str | None) -> GwpHorizon | None:
    return None if value is None else GwpHorizon.parse(str(value))


def estimate_workflow(spec_doc, profile_doc, horizon: str | None = None) -> EmissionBreakdown:
    spec = resolve_spec(spec_doc)
    profile = resolve_profile(profile_doc)
    return total_emission(spec, profile, resolve_horizon(horizon))


def scenario_workflow(
    spec_doc, profile_doc, levers_doc, horizon: str | None = None
) -> ScenarioReport:
    spec = resolve_spec(spec_doc)
    profile = resolve_profile(profile_doc)
    levers = parse_levers(levers_doc)
    return run_scenario(spec, profile, levers, resolve_horizon(horizon))


def sweep_workflow(
    spec_doc,
    profile_doc,
    axis: str,
    values: Sequence[float] | None = None,
    specs: Sequence | None = None,
    normalization: str = "none",
    horizon: str | None = None,
) -> TrendSweep:
    spec = resolve_spec(spec_doc)
    profile = resolve_profile(profile_doc)
    spec_list = [resolve_spec(entry) for entry in specs] if specs else None
    return sweep(
        spec,
        profile,
        SweepAxis.parse(axis),
        values=values,
        specs=spec_list,
        horizon=resolve_horizon(horizon),
        normalization=Normalization.parse(normalization),
    )


def assemble_workflow(
    catalog_doc,
    class_name: str,
    horizon: str | None = None,
    horizons: Sequence[str] | None = None,
    pareto: bool = False,
    max_workers: int | None = None,
):
    """Rank a catalog; with multiple horizons, report rank stability instead.

    Returns ``(payload_dict, report_or_none)``; the report object feeds CSV
    export when one exists for the payload.
    """
    catalog = resolve_catalog(catalog_doc)
    klass = server_class(class_name)
    if horizons:
        stability = rank_stability(
            catalog, klass, [GwpHorizon.parse(h) for h in horizons], max_workers=max_workers
        )
        return stability.to_json_dict(), stability
    resolved = resolve_horizon(horizon) or GwpHorizon.Y500
    assemblies = enumerate_assemblies(catalog, klass, resolved, max_workers=max_workers)
    report: RankReport = rank_assemblies(assemblies, klass.name, resolved)
    payload = report.to_json_dict()
    if pareto:
        payload["pareto_front"] = [a.to_json_dict() for a in pareto_front(assemblies)]
    return payload, report
