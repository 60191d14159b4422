"""Fab profiles: one facility's practices, serialized as a JSON document.

A profile bundles wafer geometry, the release convention, lithography
factors, per-source coefficients and GWPs, die-area models per hardware
kind, and the reference-hardware anchors.  Profiles are immutable after
construction; scenario levers derive new profiles instead of mutating.

Field names in the JSON document carry their units, e.g.
``"k_g_per_mm2_step": 0.005``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import InvalidValueError, MissingHorizonError, ProfileError, SchemaError
from .geometry import (
    DieAreaModel,
    HardwareKind,
    Lithography,
    WaferGeometry,
    die_area_model_to_json,
    parse_die_area_model,
)
from .units import (
    CompoundMix,
    CompoundRegistry,
    GwpHorizon,
    blended_gwp,
    load_registry,
)
from .usage import (
    LITH_FACTOR_SOURCES,
    SOURCE_COMPOUNDS,
    SOURCE_FAMILY,
    LithographyFactor,
    SourceId,
    UsageFamily,
)


@dataclass(frozen=True)
class ReleaseConvention:
    """Fraction of used compound that escapes to atmosphere (rho in [0,1])."""

    release_fraction: float

    def __post_init__(self) -> None:
        if not 0 <= self.release_fraction <= 1:
            raise InvalidValueError(
                "release_fraction", f"must be in [0, 1], got {self.release_fraction}"
            )

    @classmethod
    def from_recovery(cls, recovery_factor: float) -> "ReleaseConvention":
        """Build from a gas recovery factor eta: rho = 1 - eta."""
        if not 0 <= recovery_factor <= 1:
            raise InvalidValueError(
                "recovery_factor", f"must be in [0, 1], got {recovery_factor}"
            )
        return cls(1.0 - recovery_factor)


@dataclass(frozen=True)
class ReferenceHardware:
    """Step counts and anchors measured on the older-generation reference."""

    node_nm: float
    etching_steps: float = 0.0
    chamber_cleaning_steps: float = 0.0
    photolithography_steps: float = 0.0
    solvent_fluids_steps: float = 0.0
    testing_steps: float = 0.0
    vacuum_pumps_steps: float = 0.0
    plasma_coatings_steps: float = 0.0
    soldering_steps: float = 0.0
    process_time_hours: float = 0.0
    package_size_mm2: float = 4000.0

    def __post_init__(self) -> None:
        if self.node_nm <= 0:
            raise InvalidValueError("reference.node_nm", "must be > 0")
        for name in (
            "etching_steps",
            "chamber_cleaning_steps",
            "photolithography_steps",
            "solvent_fluids_steps",
            "testing_steps",
            "vacuum_pumps_steps",
            "plasma_coatings_steps",
            "soldering_steps",
            "process_time_hours",
        ):
            if getattr(self, name) < 0:
                raise InvalidValueError(f"reference.{name}", "must be >= 0")
        if self.package_size_mm2 <= 0:
            raise InvalidValueError("reference.package_size_mm2", "must be > 0")

    def steps_for(self, source: SourceId) -> float | None:
        field_name = _REFERENCE_STEP_FIELD.get(source)
        return getattr(self, field_name) if field_name is not None else None


_REFERENCE_STEP_FIELD: Mapping[SourceId, str] = {
    SourceId.ETCHING: "etching_steps",
    SourceId.CHAMBER_CLEANING: "chamber_cleaning_steps",
    SourceId.PHOTOLITHOGRAPHY: "photolithography_steps",
    SourceId.SOLVENT_FLUIDS: "solvent_fluids_steps",
    SourceId.TESTING: "testing_steps",
    SourceId.VACUUM_PUMPS: "vacuum_pumps_steps",
    SourceId.PLASMA_COATINGS: "plasma_coatings_steps",
    SourceId.VAPOR_PHASE_SOLDERING: "soldering_steps",
}

# Unit-annotated JSON field name for each family's base coefficient.
_K_FIELD: Mapping[UsageFamily, str] = {
    UsageFamily.AREA_STEP: "k_g_per_mm2_step",
    UsageFamily.PROCESS_TIME: "k_g_per_hour_w",
    UsageFamily.DIE_AREA: "k_g_per_mm2",
    UsageFamily.WAFER_AREA: "k_g_per_mm2",
    UsageFamily.PACKAGE_STEPS: "k_g_per_step",
    UsageFamily.NODE_STEPS: "k_g_per_step",
    UsageFamily.PACKAGE_AREA: "k_g_per_mm2",
}

_ALPHA_FAMILIES = frozenset(
    {
        UsageFamily.AREA_STEP,
        UsageFamily.PROCESS_TIME,
        UsageFamily.NODE_STEPS,
        UsageFamily.PACKAGE_STEPS,
    }
)


@dataclass(frozen=True)
class SourceGwp:
    """Per-source warming potential: fixed per horizon, or a compound mix."""

    values: Mapping[GwpHorizon, float] | None = None
    mix: CompoundMix | None = None

    def __post_init__(self) -> None:
        if (self.values is None) == (self.mix is None):
            raise InvalidValueError("gwp", "exactly one of a value table or a mix is required")
        if self.values is not None:
            for horizon, value in self.values.items():
                if value <= 0:
                    raise InvalidValueError(f"gwp.{horizon.value}", f"must be > 0, got {value}")

    @classmethod
    def fixed(cls, value: float, *horizons: GwpHorizon) -> "SourceGwp":
        chosen = horizons or tuple(GwpHorizon)
        return cls(values={h: value for h in chosen})

    def resolve(self, registry: CompoundRegistry | None, horizon: GwpHorizon, source: SourceId) -> float:
        if self.values is not None:
            try:
                return self.values[horizon]
            except KeyError:
                raise MissingHorizonError(
                    f"source {source.value!r} has no GWP at horizon {horizon.value}"
                )
        if registry is None:
            raise ProfileError(
                f"source {source.value!r} uses a compound mix but the profile has no compound table"
            )
        return blended_gwp(self.mix, registry, horizon)


@dataclass(frozen=True)
class SourceParams:
    """One source's fab-specific knobs: coefficient, scaling, and GWP."""

    source: SourceId
    k: float | None
    gwp: SourceGwp
    alpha: float | None = None
    uses_lith_factor: bool | None = None
    compounds: tuple[str, ...] = ()
    step_multiplier: float = 1.0
    release_multiplier: float = 1.0

    def __post_init__(self) -> None:
        family = SOURCE_FAMILY[self.source]
        prefix = f"sources.{self.source.value}"
        if self.k is not None and self.k < 0:
            raise InvalidValueError(f"{prefix}.{_K_FIELD[family]}", f"must be >= 0, got {self.k}")
        if family in _ALPHA_FAMILIES:
            if self.alpha is None:
                raise ProfileError(f"{prefix}: alpha is required for this source")
            if self.alpha < 0:
                raise InvalidValueError(f"{prefix}.alpha", f"must be >= 0, got {self.alpha}")
        elif self.alpha is not None:
            raise SchemaError(f"{prefix}: alpha does not apply to this source")
        if self.step_multiplier <= 0:
            raise InvalidValueError(f"{prefix}.step_multiplier", "must be > 0")
        if self.release_multiplier < 0:
            raise InvalidValueError(f"{prefix}.release_multiplier", "must be >= 0")
        # The lithography factor belongs to etching, chamber cleaning, and
        # photolithography only; it can be switched off there but never
        # switched on elsewhere.
        if self.uses_lith_factor and self.source not in LITH_FACTOR_SOURCES:
            raise SchemaError(f"{prefix}: uses_lith_factor does not apply to this source")

    @property
    def applies_lith_factor(self) -> bool:
        if self.uses_lith_factor is not None:
            return self.uses_lith_factor
        return self.source in LITH_FACTOR_SOURCES

    def mix_compounds(self) -> tuple[str, ...]:
        """Compounds attributed to this source, for allocation and levers."""
        if self.gwp.mix is not None:
            return self.gwp.mix.compound_ids()
        if self.compounds:
            return self.compounds
        return SOURCE_COMPOUNDS[self.source]

    def compound_shares(self) -> dict[str, float]:
        """Normalized mass shares per compound (mix ratios, else equal)."""
        if self.gwp.mix is not None:
            total = sum(ratio for _, ratio in self.gwp.mix.entries)
            return {cid: ratio / total for cid, ratio in self.gwp.mix.entries}
        compounds = self.mix_compounds()
        share = 1.0 / len(compounds)
        return {cid: share for cid in compounds}


DEFAULT_LITH_FACTORS = LithographyFactor(
    {Lithography.DUV: 1.0, Lithography.EUV: 0.8, Lithography.EUV_HIGH_NA: 0.7}
)

# Sub-linear growth of step counts with storage capacity (capacity_tb^beta).
DEFAULT_STORAGE_STEP_EXPONENT = 0.5


@dataclass(frozen=True)
class FabProfile:
    """Immutable bundle of everything one facility's model needs."""

    name: str
    geometry: WaferGeometry
    release: ReleaseConvention
    reference: ReferenceHardware
    sources: Mapping[SourceId, SourceParams]
    die_area_models: Mapping[HardwareKind, DieAreaModel]
    lith_factors: LithographyFactor = DEFAULT_LITH_FACTORS
    compound_registry: CompoundRegistry | None = None
    default_horizon: GwpHorizon = GwpHorizon.Y500
    storage_step_exponent: float = DEFAULT_STORAGE_STEP_EXPONENT
    notes: str = ""

    def __post_init__(self) -> None:
        missing = [s.value for s in SourceId if s not in self.sources]
        if missing:
            raise ProfileError(f"profile {self.name!r} lacks sources: {', '.join(missing)}")
        if self.storage_step_exponent < 0:
            raise InvalidValueError("storage_step_exponent", "must be >= 0")

    def source(self, source: SourceId) -> SourceParams:
        return self.sources[source]

    def unfilled_sources(self) -> list[SourceId]:
        """Sources whose base coefficient is still null (template state)."""
        return [s for s in SourceId if self.sources[s].k is None]

    def require_complete(self) -> None:
        unfilled = self.unfilled_sources()
        if unfilled:
            names = ", ".join(s.value for s in unfilled)
            raise ProfileError(
                f"profile {self.name!r} is a template; base coefficients missing for: {names}"
            )

    def gwp_for(self, source: SourceId, horizon: GwpHorizon) -> float:
        return self.sources[source].gwp.resolve(self.compound_registry, horizon, source)

    def with_sources(self, updates: Mapping[SourceId, SourceParams]) -> "FabProfile":
        merged = dict(self.sources)
        merged.update(updates)
        return replace(self, sources=merged)

    def with_release(self, release: ReleaseConvention) -> "FabProfile":
        return replace(self, release=release)

    def with_coefficients(self, coefficients: Mapping[SourceId, float]) -> "FabProfile":
        updates = {
            s: replace(self.sources[s], k=k) for s, k in coefficients.items()
        }
        return self.with_sources(updates)


# ---------------------------------------------------------------------------
# JSON document handling
# ---------------------------------------------------------------------------

_PROFILE_KEYS = {
    "name",
    "notes",
    "default_horizon",
    "geometry",
    "release_fraction",
    "recovery_factor",
    "lith_factors",
    "storage_step_capacity_exponent",
    "die_area_models",
    "reference",
    "sources",
    "compounds",
}

_GEOMETRY_KEYS = {"wafer_diameter_mm", "usable_fraction", "yield_fraction"}

_REFERENCE_KEYS = {
    "node_nm",
    "etching_steps",
    "chamber_cleaning_steps",
    "photolithography_steps",
    "solvent_fluids_steps",
    "testing_steps",
    "vacuum_pumps_steps",
    "plasma_coatings_steps",
    "soldering_steps",
    "process_time_hours",
    "package_size_mm2",
}

_SOURCE_KEYS_BASE = {
    "alpha",
    "gwp",
    "gwp_mix",
    "uses_lith_factor",
    "compounds",
    "step_multiplier",
    "release_multiplier",
}


def _num(obj, context: str, default=None):
    if obj is None:
        if default is not None:
            return default
        raise SchemaError(f"{context}: expected a number")
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        raise SchemaError(f"{context}: expected a number")
    return float(obj)


def _check_keys(obj: Mapping, allowed: set[str], context: str) -> None:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{context}: expected an object")
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{context}: unknown key {key!r}")


def _parse_source_gwp(obj: Mapping, context: str) -> SourceGwp:
    has_value = "gwp" in obj
    has_mix = "gwp_mix" in obj
    if has_value == has_mix:
        raise SchemaError(f"{context}: exactly one of 'gwp' or 'gwp_mix' is required")
    if has_mix:
        mix_obj = obj["gwp_mix"]
        if not isinstance(mix_obj, Mapping) or not mix_obj:
            raise SchemaError(f"{context}.gwp_mix: expected a non-empty object")
        entries = tuple(
            (str(cid), _num(ratio, f"{context}.gwp_mix.{cid}")) for cid, ratio in mix_obj.items()
        )
        return SourceGwp(mix=CompoundMix(entries))
    raw = obj["gwp"]
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        # A bare number applies uniformly across all three horizons.
        return SourceGwp.fixed(float(raw))
    if isinstance(raw, Mapping):
        values = {
            GwpHorizon.parse(str(h)): _num(v, f"{context}.gwp.{h}") for h, v in raw.items()
        }
        if not values:
            raise SchemaError(f"{context}.gwp: expected at least one horizon entry")
        return SourceGwp(values=values)
    raise SchemaError(f"{context}.gwp: expected a number or an object of horizon -> value")


def _parse_source(source: SourceId, obj: Mapping, context: str) -> SourceParams:
    family = SOURCE_FAMILY[source]
    k_field = _K_FIELD[family]
    allowed = _SOURCE_KEYS_BASE | {k_field}
    _check_keys(obj, allowed, context)
    if k_field not in obj:
        raise SchemaError(f"{context}: {k_field!r} is required (null for a template)")
    raw_k = obj[k_field]
    k = None if raw_k is None else _num(raw_k, f"{context}.{k_field}")
    alpha = None
    if family in _ALPHA_FAMILIES:
        alpha = _num(obj.get("alpha"), f"{context}.alpha")
    elif "alpha" in obj:
        raise SchemaError(f"{context}: 'alpha' does not apply to this source")
    compounds_obj = obj.get("compounds", [])
    if not isinstance(compounds_obj, list):
        raise SchemaError(f"{context}.compounds: expected a list")
    return SourceParams(
        source=source,
        k=k,
        gwp=_parse_source_gwp(obj, context),
        alpha=alpha,
        uses_lith_factor=obj.get("uses_lith_factor"),
        compounds=tuple(str(c) for c in compounds_obj),
        step_multiplier=_num(obj.get("step_multiplier"), f"{context}.step_multiplier", 1.0),
        release_multiplier=_num(
            obj.get("release_multiplier"), f"{context}.release_multiplier", 1.0
        ),
    )


def parse_profile(obj_or_text) -> FabProfile:
    """Parse and validate a profile document, rejecting unknown keys."""
    obj = json.loads(obj_or_text) if isinstance(obj_or_text, (str, bytes)) else obj_or_text
    _check_keys(obj, _PROFILE_KEYS, "profile")
    for key in ("name", "geometry", "reference", "sources", "die_area_models"):
        if key not in obj:
            raise SchemaError(f"profile: {key!r} is required")

    geom_obj = obj["geometry"]
    _check_keys(geom_obj, _GEOMETRY_KEYS, "profile.geometry")
    geometry = WaferGeometry(
        diameter_mm=_num(geom_obj.get("wafer_diameter_mm"), "profile.geometry.wafer_diameter_mm"),
        usable_fraction=_num(geom_obj.get("usable_fraction"), "profile.geometry.usable_fraction"),
        yield_fraction=_num(geom_obj.get("yield_fraction"), "profile.geometry.yield_fraction"),
    )

    has_release = "release_fraction" in obj
    has_recovery = "recovery_factor" in obj
    if has_release == has_recovery:
        raise SchemaError("profile: exactly one of 'release_fraction' or 'recovery_factor' is required")
    if has_release:
        release = ReleaseConvention(_num(obj["release_fraction"], "profile.release_fraction"))
    else:
        release = ReleaseConvention.from_recovery(
            _num(obj["recovery_factor"], "profile.recovery_factor")
        )

    lith_obj = obj.get("lith_factors")
    if lith_obj is None:
        lith_factors = DEFAULT_LITH_FACTORS
    else:
        _check_keys(lith_obj, {t.value for t in Lithography}, "profile.lith_factors")
        lith_factors = LithographyFactor(
            {
                Lithography.parse(name): _num(value, f"profile.lith_factors.{name}")
                for name, value in lith_obj.items()
            }
        )

    ref_obj = obj["reference"]
    _check_keys(ref_obj, _REFERENCE_KEYS, "profile.reference")
    reference = ReferenceHardware(
        node_nm=_num(ref_obj.get("node_nm"), "profile.reference.node_nm"),
        **{
            name: _num(ref_obj.get(name), f"profile.reference.{name}", 0.0)
            for name in _REFERENCE_KEYS - {"node_nm", "package_size_mm2"}
        },
        package_size_mm2=_num(
            ref_obj.get("package_size_mm2"), "profile.reference.package_size_mm2", 4000.0
        ),
    )

    models_obj = obj["die_area_models"]
    if not isinstance(models_obj, Mapping):
        raise SchemaError("profile.die_area_models: expected an object")
    die_area_models = {
        HardwareKind.parse(str(kind)): parse_die_area_model(
            model_obj, f"profile.die_area_models.{kind}"
        )
        for kind, model_obj in models_obj.items()
    }

    sources_obj = obj["sources"]
    if not isinstance(sources_obj, Mapping):
        raise SchemaError("profile.sources: expected an object")
    for name in sources_obj:
        SourceId.parse(str(name))  # rejects unknown source names
    sources = {
        source: _parse_source(
            source, sources_obj[source.value], f"profile.sources.{source.value}"
        )
        for source in SourceId
        if source.value in sources_obj
    }

    registry = None
    if "compounds" in obj:
        registry = load_registry({"compounds": obj["compounds"]})

    horizon = GwpHorizon.parse(str(obj.get("default_horizon", "y500")))

    return FabProfile(
        name=str(obj["name"]),
        geometry=geometry,
        release=release,
        reference=reference,
        sources=sources,
        die_area_models=die_area_models,
        lith_factors=lith_factors,
        compound_registry=registry,
        default_horizon=horizon,
        storage_step_exponent=_num(
            obj.get("storage_step_capacity_exponent"),
            "profile.storage_step_capacity_exponent",
            DEFAULT_STORAGE_STEP_EXPONENT,
        ),
        notes=str(obj.get("notes", "")),
    )


def profile_to_json(profile: FabProfile) -> dict:
    """Serialize a profile to the document form accepted by parse_profile."""
    doc: dict = {
        "name": profile.name,
        "default_horizon": profile.default_horizon.value,
        "geometry": {
            "wafer_diameter_mm": profile.geometry.diameter_mm,
            "usable_fraction": profile.geometry.usable_fraction,
            "yield_fraction": profile.geometry.yield_fraction,
        },
        "release_fraction": profile.release.release_fraction,
        "lith_factors": {
            lith.value: profile.lith_factors.phi(lith) for lith in Lithography
        },
        "storage_step_capacity_exponent": profile.storage_step_exponent,
        "die_area_models": {
            kind.value: die_area_model_to_json(model)
            for kind, model in profile.die_area_models.items()
        },
        "reference": {
            "node_nm": profile.reference.node_nm,
            **{
                name: getattr(profile.reference, name)
                for name in sorted(_REFERENCE_KEYS - {"node_nm"})
            },
        },
        "sources": {},
    }
    if profile.notes:
        doc["notes"] = profile.notes
    for source in SourceId:
        params = profile.sources[source]
        family = SOURCE_FAMILY[source]
        entry: dict = {_K_FIELD[family]: params.k}
        if params.alpha is not None:
            entry["alpha"] = params.alpha
        if params.gwp.values is not None:
            entry["gwp"] = {h.value: v for h, v in params.gwp.values.items()}
        else:
            entry["gwp_mix"] = {cid: ratio for cid, ratio in params.gwp.mix.entries}
        if params.uses_lith_factor is not None:
            entry["uses_lith_factor"] = params.uses_lith_factor
        if params.compounds:
            entry["compounds"] = list(params.compounds)
        if params.step_multiplier != 1.0:
            entry["step_multiplier"] = params.step_multiplier
        if params.release_multiplier != 1.0:
            entry["release_multiplier"] = params.release_multiplier
        doc["sources"][source.value] = entry
    if profile.compound_registry is not None:
        doc["compounds"] = profile.compound_registry.to_json_dict()["compounds"]
    return doc
