"""What-if levers: pure transformations of (spec, profile) pairs.

Each lever returns a new immutable pair; levers compose left to right and
no commutativity is promised (substituting a gas and then rebalancing
steps is not the same as the reverse).  The report pairs the baseline and
fully-levered breakdowns so every delta is recomputable from the two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .engine import EmissionBreakdown, total_emission
from .errors import EmissionModelError, LeverError, SchemaError
from .geometry import HardwareKind, HardwareSpec, Lithography
from .profile import FabProfile, ReleaseConvention, SourceGwp
from .units import CompoundMix, GwpHorizon
from .usage import SourceId

# Gases with practical closed-loop reclaim routes; the default reclaim
# lever targets every source whose mix contains one of them.
RECLAIMABLE_COMPOUNDS = frozenset({"NF3", "C2F6"})


@dataclass(frozen=True)
class CoreCacheInterchange:
    """Trade cores against cache to shrink die area at equal throughput."""

    delta_cores: float
    delta_cache_mb: float

    def apply(self, spec: HardwareSpec, profile: FabProfile):
        if spec.kind is not HardwareKind.CPU:
            raise LeverError("core_cache_interchange applies to CPU specs only")
        features = dict(spec.features)
        features["cores"] = spec.feature("cores") + self.delta_cores
        features["cache_mb"] = spec.feature("cache_mb") + self.delta_cache_mb
        for name in ("cores", "cache_mb"):
            if features[name] < 0:
                raise LeverError(f"core_cache_interchange drives {name} below zero")
        return replace(spec, features=features), profile

    def to_json_dict(self) -> dict:
        return {
            "type": "core_cache_interchange",
            "delta_cores": self.delta_cores,
            "delta_cache_mb": self.delta_cache_mb,
        }


@dataclass(frozen=True)
class CleanEtchRebalance:
    """Scale chamber-cleaning steps down and etching steps up (or vice versa)."""

    clean_step_multiplier: float
    etch_step_multiplier: float

    def __post_init__(self) -> None:
        if self.clean_step_multiplier <= 0 or self.etch_step_multiplier <= 0:
            raise LeverError("clean_etch_rebalance multipliers must be > 0")

    def apply(self, spec: HardwareSpec, profile: FabProfile):
        clean = profile.source(SourceId.CHAMBER_CLEANING)
        etch = profile.source(SourceId.ETCHING)
        return spec, profile.with_sources(
            {
                SourceId.CHAMBER_CLEANING: replace(
                    clean, step_multiplier=clean.step_multiplier * self.clean_step_multiplier
                ),
                SourceId.ETCHING: replace(
                    etch, step_multiplier=etch.step_multiplier * self.etch_step_multiplier
                ),
            }
        )

    def to_json_dict(self) -> dict:
        return {
            "type": "clean_etch_rebalance",
            "clean_step_multiplier": self.clean_step_multiplier,
            "etch_step_multiplier": self.etch_step_multiplier,
        }


@dataclass(frozen=True)
class LowGwpSubstitution:
    """Swap a source's gases for lower-GWP ones at a step-count penalty."""

    target: SourceId
    gwp: SourceGwp
    step_multiplier: float = 1.25

    def __post_init__(self) -> None:
        if self.step_multiplier <= 0:
            raise LeverError("low_gwp_substitution step_multiplier must be > 0")

    def apply(self, spec: HardwareSpec, profile: FabProfile):
        params = profile.source(self.target)
        return spec, profile.with_sources(
            {
                self.target: replace(
                    params,
                    gwp=self.gwp,
                    step_multiplier=params.step_multiplier * self.step_multiplier,
                )
            }
        )

    def to_json_dict(self) -> dict:
        doc: dict = {"type": "low_gwp_substitution", "target": self.target.value,
                     "step_multiplier": self.step_multiplier}
        if self.gwp.values is not None:
            doc["gwp"] = {h.value: v for h, v in self.gwp.values.items()}
        else:
            doc["gwp_mix"] = {cid: r for cid, r in self.gwp.mix.entries}
        return doc


@dataclass(frozen=True)
class RecoveryChange:
    """Set a new release fraction (or equivalently a new recovery factor)."""

    release: ReleaseConvention

    @classmethod
    def to_release_fraction(cls, release_fraction: float) -> "RecoveryChange":
        return cls(ReleaseConvention(release_fraction))

    @classmethod
    def to_recovery_factor(cls, recovery_factor: float) -> "RecoveryChange":
        return cls(ReleaseConvention.from_recovery(recovery_factor))

    def apply(self, spec: HardwareSpec, profile: FabProfile):
        return spec, profile.with_release(self.release)

    def to_json_dict(self) -> dict:
        return {"type": "recovery_change", "release_fraction": self.release.release_fraction}


@dataclass(frozen=True)
class ReclaimLoop:
    """Closed-loop reclaim: scale the net emissions of the affected sources.

    With no explicit source set, every source whose compound mix contains a
    reclaimable gas (NF3 or C2F6) is affected.
    """

    affected_sources: tuple[SourceId, ...] = ()
    net_multiplier: float = 0.5

    def __post_init__(self) -> None:
        if self.net_multiplier <= 0:
            raise LeverError("reclaim_loop net_multiplier must be > 0")

    def resolved_sources(self, profile: FabProfile) -> tuple[SourceId, ...]:
        if self.affected_sources:
            return self.affected_sources
        return tuple(
            source
            for source in SourceId
            if RECLAIMABLE_COMPOUNDS & set(profile.source(source).mix_compounds())
        )

    def apply(self, spec: HardwareSpec, profile: FabProfile):
        updates = {}
        for source in self.resolved_sources(profile):
            params = profile.source(source)
            updates[source] = replace(
                params, release_multiplier=params.release_multiplier * self.net_multiplier
            )
        return spec, profile.with_sources(updates)

    def to_json_dict(self) -> dict:
        doc: dict = {"type": "reclaim_loop", "net_multiplier": self.net_multiplier}
        if self.affected_sources:
            doc["sources"] = [s.value for s in self.affected_sources]
        return doc


@dataclass(frozen=True)
class LithographySwitch:
    """Move the design to another lithography generation."""

    to: Lithography

    def apply(self, spec: HardwareSpec, profile: FabProfile):
        return replace(spec, lithography=self.to), profile

    def to_json_dict(self) -> dict:
        return {"type": "lithography_switch", "to": self.to.value}


Lever = (
    CoreCacheInterchange
    | CleanEtchRebalance
    | LowGwpSubstitution
    | RecoveryChange
    | ReclaimLoop
    | LithographySwitch
)


def apply_lever(spec: HardwareSpec, profile: FabProfile, lever: Lever):
    """Apply one lever, returning a fresh (spec, profile) pair."""
    return lever.apply(spec, profile)


@dataclass(frozen=True)
class ScenarioReport:
    """Baseline vs levered breakdowns with per-source and total deltas."""

    baseline: EmissionBreakdown
    modified: EmissionBreakdown
    levers: tuple[Lever, ...]

    def per_source_delta(self) -> dict[SourceId, float]:
        return {
            source: self.modified.emission(source) - self.baseline.emission(source)
            for source in SourceId
        }

    @property
    def total_delta_gco2eq(self) -> float:
        return self.modified.total_gco2eq - self.baseline.total_gco2eq

    @property
    def total_delta_percent(self) -> float:
        if self.baseline.total_gco2eq == 0:
            return 0.0
        return 100.0 * self.total_delta_gco2eq / self.baseline.total_gco2eq

    def to_json_dict(self) -> dict:
        return {
            "baseline": self.baseline.to_json_dict(),
            "modified": self.modified.to_json_dict(),
            "levers": [lever.to_json_dict() for lever in self.levers],
            "per_source_delta_gco2eq": {
                source.value: delta for source, delta in self.per_source_delta().items()
            },
            "total_delta_gco2eq": self.total_delta_gco2eq,
            "total_delta_percent": self.total_delta_percent,
        }


def run_scenario(
    spec: HardwareSpec,
    profile: FabProfile,
    levers: Sequence[Lever],
    horizon: GwpHorizon | None = None,
) -> ScenarioReport:
    """Evaluate the baseline, apply levers left to right, and compare."""
    horizon = horizon or profile.default_horizon
    baseline = total_emission(spec, profile, horizon)
    current_spec, current_profile = spec, profile
    for index, lever in enumerate(levers):
        try:
            current_spec, current_profile = apply_lever(current_spec, current_profile, lever)
        except EmissionModelError as exc:
            raise LeverError(f"lever[{index}]: {exc}") from exc
    modified = total_emission(current_spec, current_profile, horizon)
    return ScenarioReport(baseline=baseline, modified=modified, levers=tuple(levers))


# ---------------------------------------------------------------------------
# Lever documents ("type"-discriminated JSON objects)
# ---------------------------------------------------------------------------

_LEVER_KEYS: dict[str, set[str]] = {
    "core_cache_interchange": {"delta_cores", "delta_cache_mb"},
    "clean_etch_rebalance": {"clean_step_multiplier", "etch_step_multiplier"},
    "low_gwp_substitution": {"target", "gwp", "gwp_mix", "step_multiplier"},
    "recovery_change": {"release_fraction", "recovery_factor"},
    "reclaim_loop": {"sources", "net_multiplier"},
    "lithography_switch": {"to"},
}


def _num(obj, context: str, default=None):
    if obj is None:
        if default is not None:
            return default
        raise SchemaError(f"{context}: expected a number")
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        raise SchemaError(f"{context}: expected a number")
    return float(obj)


def parse_lever(obj: Mapping, context: str = "lever") -> Lever:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{context}: expected an object")
    lever_type = obj.get("type")
    if lever_type not in _LEVER_KEYS:
        known = ", ".join(sorted(_LEVER_KEYS))
        raise SchemaError(f"{context}: unknown lever type {lever_type!r} (known: {known})")
    allowed = _LEVER_KEYS[lever_type] | {"type"}
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{context} ({lever_type}): unknown key {key!r}")

    if lever_type == "core_cache_interchange":
        return CoreCacheInterchange(
            delta_cores=_num(obj.get("delta_cores"), f"{context}.delta_cores", 0.0),
            delta_cache_mb=_num(obj.get("delta_cache_mb"), f"{context}.delta_cache_mb", 0.0),
        )
    if lever_type == "clean_etch_rebalance":
        return CleanEtchRebalance(
            clean_step_multiplier=_num(
                obj.get("clean_step_multiplier"), f"{context}.clean_step_multiplier"
            ),
            etch_step_multiplier=_num(
                obj.get("etch_step_multiplier"), f"{context}.etch_step_multiplier"
            ),
        )
    if lever_type == "low_gwp_substitution":
        target = SourceId.parse(str(obj.get("target", "chamber_cleaning")))
        has_value = "gwp" in obj
        has_mix = "gwp_mix" in obj
        if has_value == has_mix:
            raise SchemaError(f"{context}: exactly one of 'gwp' or 'gwp_mix' is required")
        if has_value:
            raw = obj["gwp"]
            if isinstance(raw, Mapping):
                gwp = SourceGwp(
                    values={
                        GwpHorizon.parse(str(h)): _num(v, f"{context}.gwp.{h}")
                        for h, v in raw.items()
                    }
                )
            else:
                gwp = SourceGwp.fixed(_num(raw, f"{context}.gwp"))
        else:
            mix_obj = obj["gwp_mix"]
            if not isinstance(mix_obj, Mapping) or not mix_obj:
                raise SchemaError(f"{context}.gwp_mix: expected a non-empty object")
            gwp = SourceGwp(
                mix=CompoundMix(
                    tuple(
                        (str(cid), _num(r, f"{context}.gwp_mix.{cid}"))
                        for cid, r in mix_obj.items()
                    )
                )
            )
        return LowGwpSubstitution(
            target=target,
            gwp=gwp,
            step_multiplier=_num(obj.get("step_multiplier"), f"{context}.step_multiplier", 1.25),
        )
    if lever_type == "recovery_change":
        has_release = "release_fraction" in obj
        has_recovery = "recovery_factor" in obj
        if has_release == has_recovery:
            raise SchemaError(
                f"{context}: exactly one of 'release_fraction' or 'recovery_factor' is required"
            )
        if has_release:
            return RecoveryChange.to_release_fraction(
                _num(obj["release_fraction"], f"{context}.release_fraction")
            )
        return RecoveryChange.to_recovery_factor(
            _num(obj["recovery_factor"], f"{context}.recovery_factor")
        )
    if lever_type == "reclaim_loop":
        sources_obj = obj.get("sources", [])
        if not isinstance(sources_obj, list):
            raise SchemaError(f"{context}.sources: expected a list")
        return ReclaimLoop(
            affected_sources=tuple(SourceId.parse(str(s)) for s in sources_obj),
            net_multiplier=_num(obj.get("net_multiplier"), f"{context}.net_multiplier", 0.5),
        )
    return LithographySwitch(to=Lithography.parse(str(obj.get("to", ""))))


def parse_levers(obj_or_text) -> list[Lever]:
    """Parse a scenario file: a JSON list of lever objects."""
    obj = json.loads(obj_or_text) if isinstance(obj_or_text, (str, bytes)) else obj_or_text
    if not isinstance(obj, list):
        raise SchemaError("levers: expected a JSON list of lever objects")
    return [parse_lever(entry, f"levers[{i}]") for i, entry in enumerate(obj)]
