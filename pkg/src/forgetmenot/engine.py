"""End-to-end emission evaluation for one hardware spec at one fab.

Each source contributes

    emission = wafers_per_unit * usage_g_per_wafer * release_fraction * gwp

and the total is the sum over the twelve sources in declaration order.
Evaluation is pure: identical inputs give bit-identical breakdowns, and the
breakdown echoes every factor so each per-source value can be recomputed
exactly from its own row.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from .errors import EmissionModelError, InvalidValueError, ProfileError
from .geometry import HardwareKind, HardwareSpec, die_area, wafer_area, wafers_per_unit
from .profile import FabProfile
from .units import GwpHorizon
from .usage import SourceId, UsageContext, usage_for_source


@dataclass(frozen=True)
class SourceEmission:
    """One source's row in a breakdown; the product of the four factors."""

    source: SourceId
    usage_g_per_wafer: float
    wafers_per_unit: float
    release_fraction: float
    gwp: float
    emission_gco2eq: float

    def to_json_dict(self) -> dict:
        return {
            "source": self.source.value,
            "usage_g_per_wafer": self.usage_g_per_wafer,
            "wafers_per_unit": self.wafers_per_unit,
            "release_fraction": self.release_fraction,
            "gwp": self.gwp,
            "emission_gco2eq": self.emission_gco2eq,
        }


@dataclass(frozen=True)
class EmissionBreakdown:
    """Per-source emissions plus the total, with the inputs echoed."""

    spec: HardwareSpec
    profile_name: str
    horizon: GwpHorizon
    sources: tuple[SourceEmission, ...]
    total_gco2eq: float

    def emission(self, source: SourceId) -> float:
        for row in self.sources:
            if row.source is source:
                return row.emission_gco2eq
        raise InvalidValueError("source", f"breakdown has no row for {source.value!r}")

    def row(self, source: SourceId) -> SourceEmission:
        for entry in self.sources:
            if entry.source is source:
                return entry
        raise InvalidValueError("source", f"breakdown has no row for {source.value!r}")

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "profile": self.profile_name,
            "horizon": self.horizon.value,
            "sources": [row.to_json_dict() for row in self.sources],
            "total_gco2eq": self.total_gco2eq,
        }


def _usage_context(spec: HardwareSpec, profile: FabProfile) -> UsageContext:
    model = profile.die_area_models.get(spec.kind)
    if model is None:
        raise ProfileError(
            f"profile {profile.name!r} has no die-area model for kind {spec.kind.value!r}"
        )
    area = die_area(spec, model)
    node_ratio = profile.reference.node_nm / spec.node_nm
    step_count_multiplier = 1.0
    if spec.kind is HardwareKind.STORAGE and profile.storage_step_exponent > 0:
        capacity = spec.features.get("capacity_tb")
        if capacity is not None and capacity > 0:
            step_count_multiplier = capacity**profile.storage_step_exponent
    return UsageContext(
        die_area_mm2=area,
        wafer_area_mm2=wafer_area(profile.geometry),
        node_ratio=node_ratio,
        phi=profile.lith_factors.phi(spec.lithography),
        tdp_w=spec.tdp_w,
        package_size_mm2=spec.package_size_mm2,
        package_size_ref_mm2=profile.reference.package_size_mm2,
        t_process_ref_hours=profile.reference.process_time_hours,
        step_count_multiplier=step_count_multiplier,
    )


def _source_row(
    spec: HardwareSpec,
    profile: FabProfile,
    source: SourceId,
    horizon: GwpHorizon,
    ctx: UsageContext,
    wafers: float,
) -> SourceEmission:
    params = profile.source(source)
    if params.k is None:
        raise ProfileError(
            f"profile {profile.name!r}: source {source.value!r} has no base coefficient"
        )
    # Usage is linear in its step/time anchor, so the per-source step
    # multiplier (scenario levers) can scale the finished usage directly.
    usage = usage_for_source(
        source,
        params.k,
        params.alpha,
        profile.reference.steps_for(source),
        ctx if params.applies_lith_factor else _without_phi(ctx),
    )
    if params.step_multiplier != 1.0:
        usage = usage * params.step_multiplier
    release = profile.release.release_fraction * params.release_multiplier
    gwp = profile.gwp_for(source, horizon)
    emission = wafers * usage * release * gwp
    return SourceEmission(
        source=source,
        usage_g_per_wafer=usage,
        wafers_per_unit=wafers,
        release_fraction=release,
        gwp=gwp,
        emission_gco2eq=emission,
    )


def _without_phi(ctx: UsageContext) -> UsageContext:
    # usage_for_source already neutralizes phi for non-lithography sources;
    # this extra guard covers profiles that override uses_lith_factor.
    if ctx.phi == 1.0:
        return ctx
    return replace(ctx, phi=1.0)


def _named_after_source(source: SourceId, exc: EmissionModelError) -> EmissionModelError:
    """Prefix a source-level failure with the source name, keeping its type."""
    if source.value in str(exc):
        return exc
    if isinstance(exc, InvalidValueError):
        return InvalidValueError(f"{source.value}: {exc.field}", exc.detail)
    return type(exc)(f"{source.value}: {exc}")


def _wafers(ctx: UsageContext, profile: FabProfile) -> float:
    # A zero-area model is legal at the engine level and zeroes every
    # source, because each emission is proportional to the wafer fraction.
    if ctx.die_area_mm2 == 0:
        return 0.0
    return wafers_per_unit(ctx.die_area_mm2, profile.geometry)


def released_mass_per_unit_per_k(
    spec: HardwareSpec, profile: FabProfile, source: SourceId
) -> float:
    """Released grams per manufactured unit, per unit of base coefficient.

    Every usage formula is linear in its coefficient k, so the released
    compound mass for a source is k times this value.  Works on templates
    whose k is still null; used by calibration to build its linear system.
    """
    ctx = _usage_context(spec, profile)
    wafers = _wafers(ctx, profile)
    params = profile.source(source)
    usage = usage_for_source(
        source,
        1.0,
        params.alpha,
        profile.reference.steps_for(source),
        ctx if params.applies_lith_factor else _without_phi(ctx),
    )
    usage = usage * params.step_multiplier
    release = profile.release.release_fraction * params.release_multiplier
    return wafers * usage * release


def source_emission(
    spec: HardwareSpec,
    profile: FabProfile,
    source: SourceId,
    horizon: GwpHorizon | None = None,
) -> float:
    """Emission in gCO2eq from a single source."""
    horizon = horizon or profile.default_horizon
    ctx = _usage_context(spec, profile)
    wafers = _wafers(ctx, profile)
    return _source_row(spec, profile, source, horizon, ctx, wafers).emission_gco2eq


def total_emission(
    spec: HardwareSpec,
    profile: FabProfile,
    horizon: GwpHorizon | None = None,
) -> EmissionBreakdown:
    """Evaluate all twelve sources; the total sums them in declaration order."""
    horizon = horizon or profile.default_horizon
    profile.require_complete()
    ctx = _usage_context(spec, profile)
    wafers = _wafers(ctx, profile)
    rows = []
    total = 0.0
    for source in SourceId:
        try:
            row = _source_row(spec, profile, source, horizon, ctx, wafers)
        except EmissionModelError as exc:
            raise _named_after_source(source, exc) from exc
        rows.append(row)
        total += row.emission_gco2eq
    return EmissionBreakdown(
        spec=spec,
        profile_name=profile.name,
        horizon=horizon,
        sources=tuple(rows),
        total_gco2eq=total,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Model-vs-measured relative differences, per source and in total."""

    per_source: Mapping[SourceId, dict]
    skipped: tuple[SourceId, ...]
    model_total: float
    measured_total: float
    total_pct_diff: float
    max_abs_pct_diff: float

    def to_json_dict(self) -> dict:
        return {
            "per_source": {
                source.value: dict(entry) for source, entry in self.per_source.items()
            },
            "skipped": [source.value for source in self.skipped],
            "model_total": self.model_total,
            "measured_total": self.measured_total,
            "total_pct_diff": self.total_pct_diff,
            "max_abs_pct_diff": self.max_abs_pct_diff,
        }


def compare_to_measured(
    breakdown: EmissionBreakdown, measured: Mapping[SourceId, float]
) -> ComparisonReport:
    """Relative diffs (model - measured) / measured over the covered sources.

    Sources absent from ``measured`` are listed as skipped; totals compare
    only the covered subset so partial measurements stay meaningful.
    """
    per_source: dict[SourceId, dict] = {}
    skipped: list[SourceId] = []
    model_total = 0.0
    measured_total = 0.0
    max_abs = 0.0
    for row in breakdown.sources:
        if row.source not in measured:
            skipped.append(row.source)
            continue
        measured_value = measured[row.source]
        if measured_value <= 0:
            raise InvalidValueError(
                f"measured.{row.source.value}", f"must be > 0, got {measured_value}"
            )
        diff = (row.emission_gco2eq - measured_value) / measured_value
        per_source[row.source] = {
            "model_gco2eq": row.emission_gco2eq,
            "measured_gco2eq": measured_value,
            "pct_diff": 100.0 * diff,
        }
        model_total += row.emission_gco2eq
        measured_total += measured_value
        max_abs = max(max_abs, abs(100.0 * diff))
    total_diff = (
        100.0 * (model_total - measured_total) / measured_total if measured_total > 0 else 0.0
    )
    return ComparisonReport(
        per_source=per_source,
        skipped=tuple(skipped),
        model_total=model_total,
        measured_total=measured_total,
        total_pct_diff=total_diff,
        max_abs_pct_diff=max_abs,
    )


def breakdown_from_json(obj: Mapping) -> EmissionBreakdown:
    """Rebuild a breakdown from its JSON form (lossless round-trip)."""
    from .geometry import parse_spec

    sources = tuple(
        SourceEmission(
            source=SourceId.parse(row["source"]),
            usage_g_per_wafer=float(row["usage_g_per_wafer"]),
            wafers_per_unit=float(row["wafers_per_unit"]),
            release_fraction=float(row["release_fraction"]),
            gwp=float(row["gwp"]),
            emission_gco2eq=float(row["emission_gco2eq"]),
        )
        for row in obj["sources"]
    )
    return EmissionBreakdown(
        spec=parse_spec(obj["spec"]),
        profile_name=str(obj["profile"]),
        horizon=GwpHorizon.parse(str(obj["horizon"])),
        sources=sources,
        total_gco2eq=float(obj["total_gco2eq"]),
    )
