"""Compound registry, GWP tables, and CO2-equivalent unit conversions.

All masses are handled in grams internally; teragrams appear only at the
MMTCE boundary (1 Tg = 1e12 g).  GWP values are dimensionless multipliers
(gCO2eq per g of compound) and are always inputs, never derived from
radiative-efficiency integrals.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    InvalidValueError,
    MissingHorizonError,
    SchemaError,
    UnknownCompoundError,
    ZeroWeightMixError,
)

GRAMS_PER_TERAGRAM = 1e12

# Carbon / CO2 molecular-weight ratio used by the MMTCE convention.
CARBON_RATIO = 12.0 / 44.0


class GwpHorizon(enum.Enum):
    """Time horizon over which a warming potential is integrated."""

    Y20 = "y20"
    Y100 = "y100"
    Y500 = "y500"

    @classmethod
    def parse(cls, value: str) -> "GwpHorizon":
        try:
            return cls(value.lower())
        except ValueError:
            choices = ", ".join(h.value for h in cls)
            raise InvalidValueError("horizon", f"expected one of {choices}, got {value!r}")


@dataclass(frozen=True)
class FluorinatedCompound:
    """One fluorinated gas with its warming potential per horizon.

    ``radiative_efficiency`` (W m^-2 ppb^-1) and ``atmospheric_lifetime``
    (years) are informational; nothing is computed from them.
    """

    id: str
    gwp: Mapping[GwpHorizon, float]
    radiative_efficiency: float | None = None
    atmospheric_lifetime: float | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidValueError("compound.id", "must be non-empty")
        if not self.gwp:
            raise InvalidValueError(f"compound.{self.id}.gwp", "at least one horizon required")
        for horizon, value in self.gwp.items():
            if value <= 0:
                raise InvalidValueError(
                    f"compound.{self.id}.gwp.{horizon.value}", f"must be > 0, got {value}"
                )
        for name, value in (
            ("radiative_efficiency", self.radiative_efficiency),
            ("atmospheric_lifetime", self.atmospheric_lifetime),
        ):
            if value is not None and value <= 0:
                raise InvalidValueError(f"compound.{self.id}.{name}", f"must be > 0, got {value}")

    def gwp_at(self, horizon: GwpHorizon) -> float:
        try:
            return self.gwp[horizon]
        except KeyError:
            raise MissingHorizonError(
                f"compound {self.id!r} has no GWP at horizon {horizon.value}"
            )


@dataclass(frozen=True)
class CompoundMix:
    """Weighted combination of compounds; ratios need not sum to 1."""

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise InvalidValueError("mix.entries", "at least one entry required")
        for compound_id, ratio in self.entries:
            if ratio < 0:
                raise InvalidValueError(f"mix.{compound_id}", f"ratio must be >= 0, got {ratio}")
        if all(ratio == 0 for _, ratio in self.entries):
            raise ZeroWeightMixError("all emission ratios in the mix are zero")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float]) -> "CompoundMix":
        return cls(tuple(mapping.items()))

    def compound_ids(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.entries)


class CompoundRegistry:
    """Immutable lookup table of compounds keyed by id."""

    def __init__(self, compounds: Iterable[FluorinatedCompound]):
        table: dict[str, FluorinatedCompound] = {}
        for compound in compounds:
            if compound.id in table:
                raise SchemaError(f"duplicate compound id {compound.id!r}")
            table[compound.id] = compound
        self._table = table

    def __contains__(self, compound_id: str) -> bool:
        return compound_id in self._table

    def __len__(self) -> int:
        return len(self._table)

    def ids(self) -> tuple[str, ...]:
        return tuple(self._table)

    def get(self, compound_id: str) -> FluorinatedCompound:
        try:
            return self._table[compound_id]
        except KeyError:
            raise UnknownCompoundError(f"unknown compound id {compound_id!r}")

    def to_json_dict(self) -> dict:
        return {
            "compounds": [_compound_to_json(c) for c in self._table.values()]
        }


def blended_gwp(mix: CompoundMix, registry: CompoundRegistry, horizon: GwpHorizon) -> float:
    """Ratio-weighted mean GWP of a mix: sum(r_c * GWP_c) / sum(r_c)."""
    weighted = 0.0
    total_ratio = 0.0
    for compound_id, ratio in mix.entries:
        compound = registry.get(compound_id)
        weighted += ratio * compound.gwp_at(horizon)
        total_ratio += ratio
    # total_ratio > 0 is guaranteed by the CompoundMix invariant.
    return weighted / total_ratio


def mmtce(mass_tg: float, gwp: float) -> float:
    """Million metric tons of carbon equivalent: mass(Tg) * GWP * 12/44."""
    if mass_tg < 0:
        raise InvalidValueError("mass_tg", f"must be >= 0, got {mass_tg}")
    if gwp <= 0:
        raise InvalidValueError("gwp", f"must be > 0, got {gwp}")
    return mass_tg * gwp * CARBON_RATIO


def grams_to_co2eq(mass_g: float, gwp: float) -> float:
    """Convert a compound mass in grams to gCO2eq via its GWP multiplier."""
    if mass_g < 0:
        raise InvalidValueError("mass_g", f"must be >= 0, got {mass_g}")
    return mass_g * gwp


# ---------------------------------------------------------------------------
# JSON document handling
# ---------------------------------------------------------------------------

_COMPOUND_KEYS = {"id", "gwp", "radiative_efficiency", "lifetime_years"}


def _require_keys(obj: Mapping, allowed: set[str], context: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{context}: unknown key {key!r}")


def _parse_gwp_map(obj, context: str) -> dict[GwpHorizon, float]:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{context}: expected an object of horizon -> value")
    result: dict[GwpHorizon, float] = {}
    for key, value in obj.items():
        horizon = GwpHorizon.parse(str(key))
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{context}.{key}: expected a number")
        result[horizon] = float(value)
    return result


def parse_compound(obj: Mapping, context: str = "compound") -> FluorinatedCompound:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{context}: expected an object")
    _require_keys(obj, _COMPOUND_KEYS, context)
    if "id" not in obj or "gwp" not in obj:
        raise SchemaError(f"{context}: 'id' and 'gwp' are required")
    return FluorinatedCompound(
        id=str(obj["id"]),
        gwp=_parse_gwp_map(obj["gwp"], f"{context}.gwp"),
        radiative_efficiency=obj.get("radiative_efficiency"),
        atmospheric_lifetime=obj.get("lifetime_years"),
    )


def _compound_to_json(compound: FluorinatedCompound) -> dict:
    doc: dict = {
        "id": compound.id,
        "gwp": {h.value: v for h, v in compound.gwp.items()},
    }
    if compound.radiative_efficiency is not None:
        doc["radiative_efficiency"] = compound.radiative_efficiency
    if compound.atmospheric_lifetime is not None:
        doc["lifetime_years"] = compound.atmospheric_lifetime
    return doc


def load_registry(text_or_obj) -> CompoundRegistry:
    """Parse a registry document: ``{"compounds": [{"id", "gwp", ...}]}``."""
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
    if not isinstance(obj, Mapping):
        raise SchemaError("registry: expected a top-level object")
    _require_keys(obj, {"compounds"}, "registry")
    compounds = obj.get("compounds")
    if not isinstance(compounds, list):
        raise SchemaError("registry.compounds: expected a list")
    return CompoundRegistry(
        parse_compound(entry, f"registry.compounds[{i}]") for i, entry in enumerate(compounds)
    )


def default_registry() -> CompoundRegistry:
    """Compound-level GWPs known with confidence; intentionally sparse.

    Sources fall back to blended per-source values; only CF4 and SF6 carry
    compound-level numbers out of the box (500-year horizon).
    """
    return CompoundRegistry(
        [
            FluorinatedCompound("CF4", {GwpHorizon.Y500: 7380.0}),
            FluorinatedCompound("SF6", {GwpHorizon.Y500: 25200.0}),
        ]
    )
