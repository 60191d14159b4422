"""Server assembly: enumerate CPU x DRAM x storage triples and rank them.

Catalogs are small (thousands of triples), so the optimizer is exhaustive
by design: enumeration, ranking, the Pareto front, and rank stability are
all exact.  Embodied carbon and performance scores are catalog inputs; the
fluorinated part of each component is evaluated through the emission
engine against the component's fab profile.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .engine import total_emission
from .errors import CatalogError, SchemaError
from .geometry import HardwareKind, HardwareSpec, parse_spec
from .profile import FabProfile, parse_profile
from .units import GwpHorizon
from . import presets


@dataclass(frozen=True)
class Component:
    """One catalog entry: a part, its fab, and its dataset-supplied scores."""

    id: str
    kind: HardwareKind
    vendor: str
    generation: int
    spec: HardwareSpec
    fab_profile: str
    embodied_carbon_gco2eq: float
    performance_score: float
    attributes: Mapping[str, str]

    def __post_init__(self) -> None:
        if self.embodied_carbon_gco2eq < 0:
            raise SchemaError(f"component {self.id!r}: embodied_carbon_gco2eq must be >= 0")
        if self.performance_score < 0:
            raise SchemaError(f"component {self.id!r}: performance_score must be >= 0")

    def attribute(self, name: str) -> str | None:
        return self.attributes.get(name)

    def feature(self, name: str) -> float:
        return self.spec.features.get(name, 0.0)


@dataclass(frozen=True)
class Catalog:
    components: tuple[Component, ...]
    profiles: Mapping[str, FabProfile]

    def by_kind(self, kind: HardwareKind) -> list[Component]:
        return sorted((c for c in self.components if c.kind is kind), key=lambda c: c.id)

    def resolve_profile(self, component: Component) -> FabProfile:
        profile = self.profiles.get(component.fab_profile)
        if profile is not None:
            return profile
        try:
            return parse_profile(presets.load_preset_json("profile", component.fab_profile))
        except Exception:
            raise CatalogError(
                f"component {component.id!r}: fab_profile {component.fab_profile!r} "
                "matches no catalog profile or preset"
            )


class ServerClassName(enum.Enum):
    GENERAL_PURPOSE = "general_purpose"
    COMPUTE_OPTIMIZED = "compute_optimized"
    MEMORY_OPTIMIZED = "memory_optimized"
    STORAGE_OPTIMIZED = "storage_optimized"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ServerClass:
    """Named predicate over a (cpu, dram, storage) triple."""

    name: str
    predicate: Callable[[Component, Component, Component], bool]

    def admits(self, cpu: Component, dram: Component, storage: Component) -> bool:
        return self.predicate(cpu, dram, storage)


def _general_purpose(cpu: Component, dram: Component, storage: Component) -> bool:
    return True


def _compute_optimized(cpu: Component, dram: Component, storage: Component) -> bool:
    return cpu.feature("cores") > 24 and cpu.generation in (4, 5)


def _memory_optimized(cpu: Component, dram: Component, storage: Component) -> bool:
    return (
        20 <= cpu.feature("cores") <= 32
        and dram.attribute("memory_standard") == "ddr5"
        and dram.feature("memory_gb") > 32
    )


def _storage_optimized(cpu: Component, dram: Component, storage: Component) -> bool:
    return 20 <= cpu.feature("cores") <= 32 and storage.attribute("storage_interface") == "nvme"


BUILTIN_CLASSES: dict[str, ServerClass] = {
    "general_purpose": ServerClass("general_purpose", _general_purpose),
    "compute_optimized": ServerClass("compute_optimized", _compute_optimized),
    "memory_optimized": ServerClass("memory_optimized", _memory_optimized),
    "storage_optimized": ServerClass("storage_optimized", _storage_optimized),
}


def server_class(name: str) -> ServerClass:
    try:
        return BUILTIN_CLASSES[name.lower()]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_CLASSES))
        raise CatalogError(f"unknown server class {name!r} (known: {known})")


_CONSTRAINT_OPS: dict[str, Callable[[float | str, float | str], bool]] = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


@dataclass(frozen=True)
class AttributeConstraint:
    """One clause of a custom class: <component>.<field> <op> <value>.

    ``field`` resolves against the component's scalar fields (generation,
    vendor, performance_score, embodied_carbon_gco2eq), then its spec
    features, then its attributes map.
    """

    component: str  # cpu | dram | storage
    field: str
    op: str
    value: float | str

    def __post_init__(self) -> None:
        if self.component not in ("cpu", "dram", "storage"):
            raise SchemaError(f"constraint: unknown component {self.component!r}")
        if self.op not in _CONSTRAINT_OPS:
            raise SchemaError(f"constraint: unknown operator {self.op!r}")

    def holds(self, component: Component) -> bool:
        actual: float | str | None
        if self.field == "generation":
            actual = component.generation
        elif self.field == "vendor":
            actual = component.vendor
        elif self.field == "performance_score":
            actual = component.performance_score
        elif self.field == "embodied_carbon_gco2eq":
            actual = component.embodied_carbon_gco2eq
        elif self.field in component.spec.features:
            actual = component.spec.features[self.field]
        else:
            actual = component.attributes.get(self.field)
        if actual is None:
            return False
        return _CONSTRAINT_OPS[self.op](actual, self.value)


def custom_server_class(
    constraints: Sequence[AttributeConstraint], name: str = "custom"
) -> ServerClass:
    """Conjunction of constraints over the (cpu, dram, storage) triple."""

    def admit(cpu: Component, dram: Component, storage: Component) -> bool:
        picked = {"cpu": cpu, "dram": dram, "storage": storage}
        return all(c.holds(picked[c.component]) for c in constraints)

    return ServerClass(name, admit)


def parse_constraints(obj) -> list[AttributeConstraint]:
    """Parse a JSON list of {component, field, op, value} clauses."""
    if not isinstance(obj, list):
        raise SchemaError("constraints: expected a JSON list")
    clauses = []
    for i, entry in enumerate(obj):
        if not isinstance(entry, Mapping):
            raise SchemaError(f"constraints[{i}]: expected an object")
        for key in entry:
            if key not in {"component", "field", "op", "value"}:
                raise SchemaError(f"constraints[{i}]: unknown key {key!r}")
        for key in ("component", "field", "op", "value"):
            if key not in entry:
                raise SchemaError(f"constraints[{i}]: {key!r} is required")
        clauses.append(
            AttributeConstraint(
                component=str(entry["component"]),
                field=str(entry["field"]),
                op=str(entry["op"]),
                value=entry["value"],
            )
        )
    return clauses


@dataclass(frozen=True)
class Assembly:
    """One CPU+DRAM+storage triple with its emission decomposition."""

    cpu: str
    dram: str
    storage: str
    fluorinated_gco2eq: Mapping[str, float]  # keyed cpu/dram/storage
    embodied_gco2eq: Mapping[str, float]
    total_gco2eq: float
    performance: float

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.cpu, self.dram, self.storage)

    def to_json_dict(self) -> dict:
        return {
            "cpu": self.cpu,
            "dram": self.dram,
            "storage": self.storage,
            "embodied_gco2eq": dict(self.embodied_gco2eq),
            "fluorinated_gco2eq": dict(self.fluorinated_gco2eq),
            "embodied_total_gco2eq": sum(self.embodied_gco2eq.values()),
            "fluorinated_total_gco2eq": sum(self.fluorinated_gco2eq.values()),
            "total_gco2eq": self.total_gco2eq,
            "performance": self.performance,
        }


def _fluorinated_totals(
    catalog: Catalog, components: Sequence[Component], horizon: GwpHorizon, max_workers: int | None
) -> dict[str, float]:
    def evaluate(component: Component) -> tuple[str, float]:
        profile = catalog.resolve_profile(component)
        breakdown = total_emission(component.spec, profile, horizon)
        return component.id, breakdown.total_gco2eq

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return dict(pool.map(evaluate, components))
    return dict(evaluate(c) for c in components)


def enumerate_assemblies(
    catalog: Catalog,
    klass: ServerClass,
    horizon: GwpHorizon = GwpHorizon.Y500,
    max_workers: int | None = None,
) -> list[Assembly]:
    """All admissible triples, ordered by (cpu id, dram id, storage id).

    Per-component fluorinated totals may be computed in parallel; the
    returned ordering is fixed by the lexicographic triple order, so the
    result is identical regardless of ``max_workers``.
    """
    cpus = catalog.by_kind(HardwareKind.CPU)
    drams = catalog.by_kind(HardwareKind.DRAM)
    storages = catalog.by_kind(HardwareKind.STORAGE)
    if not cpus or not drams or not storages:
        raise CatalogError("catalog needs at least one component of each kind")
    fluorinated = _fluorinated_totals(
        catalog, [*cpus, *drams, *storages], horizon, max_workers
    )
    assemblies = []
    for cpu in cpus:
        for dram in drams:
            for storage in storages:
                if not klass.admits(cpu, dram, storage):
                    continue
                embodied = {
                    "cpu": cpu.embodied_carbon_gco2eq,
                    "dram": dram.embodied_carbon_gco2eq,
                    "storage": storage.embodied_carbon_gco2eq,
                }
                fluor = {
                    "cpu": fluorinated[cpu.id],
                    "dram": fluorinated[dram.id],
                    "storage": fluorinated[storage.id],
                }
                total = sum(embodied.values()) + sum(fluor.values())
                assemblies.append(
                    Assembly(
                        cpu=cpu.id,
                        dram=dram.id,
                        storage=storage.id,
                        fluorinated_gco2eq=fluor,
                        embodied_gco2eq=embodied,
                        total_gco2eq=total,
                        performance=cpu.performance_score
                        + dram.performance_score
                        + storage.performance_score,
                    )
                )
    return assemblies


def _rank_key(assembly: Assembly):
    return (assembly.total_gco2eq, assembly.cpu, assembly.dram, assembly.storage)


@dataclass(frozen=True)
class RankReport:
    """Ascending-emission ranking with the lowest/median/highest picks."""

    klass: str
    horizon: GwpHorizon
    ranking: tuple[Assembly, ...]

    @property
    def count(self) -> int:
        return len(self.ranking)

    @property
    def lowest(self) -> Assembly:
        return self.ranking[0]

    @property
    def median(self) -> Assembly:
        # Lower median of the tie-broken total order.
        return self.ranking[(len(self.ranking) - 1) // 2]

    @property
    def highest(self) -> Assembly:
        return self.ranking[-1]

    def to_json_dict(self) -> dict:
        return {
            "class": self.klass,
            "horizon": self.horizon.value,
            "count": self.count,
            "lowest": self.lowest.to_json_dict(),
            "median": self.median.to_json_dict(),
            "highest": self.highest.to_json_dict(),
            "ranking": [
                {"rank": i + 1, **assembly.to_json_dict()}
                for i, assembly in enumerate(self.ranking)
            ],
        }


def rank_assemblies(
    assemblies: Sequence[Assembly],
    klass: str = "general_purpose",
    horizon: GwpHorizon = GwpHorizon.Y500,
) -> RankReport:
    """Sort ascending by total emissions, ids breaking ties."""
    if not assemblies:
        raise CatalogError("no feasible assembly")
    return RankReport(
        klass=klass, horizon=horizon, ranking=tuple(sorted(assemblies, key=_rank_key))
    )


def pareto_front(assemblies: Sequence[Assembly]) -> list[Assembly]:
    """Assemblies not dominated in (performance up, emissions down).

    b dominates a when b.performance >= a.performance and
    b.total <= a.total with at least one strict inequality.  The front is
    returned sorted by emissions ascending (ids break ties).
    """
    if not assemblies:
        raise CatalogError("no assemblies to filter")
    ordered = sorted(assemblies, key=_rank_key)
    front: list[Assembly] = []
    best_perf = float("-inf")
    index = 0
    while index < len(ordered):
        # Group of equal totals.
        group_end = index
        while (
            group_end < len(ordered)
            and ordered[group_end].total_gco2eq == ordered[index].total_gco2eq
        ):
            group_end += 1
        group = ordered[index:group_end]
        group_max = max(a.performance for a in group)
        if group_max > best_perf:
            front.extend(a for a in group if a.performance == group_max)
            best_perf = group_max
        index = group_end
    return front


@dataclass(frozen=True)
class RankStabilityReport:
    """How the emission ranking permutes across GWP horizons."""

    klass: str
    horizons: tuple[GwpHorizon, ...]
    rankings: Mapping[GwpHorizon, tuple[tuple[str, str, str], ...]]

    def rank_of(self, key: tuple[str, str, str], horizon: GwpHorizon) -> int:
        return self.rankings[horizon].index(key) + 1

    def winners(self) -> dict[GwpHorizon, tuple[str, str, str]]:
        return {h: self.rankings[h][0] for h in self.horizons}

    def to_json_dict(self) -> dict:
        def fmt(key: tuple[str, str, str]) -> str:
            return "|".join(key)

        return {
            "class": self.klass,
            "horizons": [h.value for h in self.horizons],
            "rankings": {
                h.value: [fmt(key) for key in self.rankings[h]] for h in self.horizons
            },
            "winners": {
                h.value: {
                    "assembly": fmt(self.rankings[h][0]),
                    "rank_under": {
                        other.value: self.rank_of(self.rankings[h][0], other)
                        for other in self.horizons
                    },
                }
                for h in self.horizons
            },
            "stable": all(
                self.rankings[h] == self.rankings[self.horizons[0]] for h in self.horizons
            ),
        }


def rank_stability(
    catalog: Catalog,
    klass: ServerClass,
    horizons: Sequence[GwpHorizon],
    max_workers: int | None = None,
) -> RankStabilityReport:
    """Recompute fluorinated parts per horizon and compare the rankings."""
    if not horizons:
        raise CatalogError("at least one horizon is required")
    rankings: dict[GwpHorizon, tuple[tuple[str, str, str], ...]] = {}
    for horizon in horizons:
        assemblies = enumerate_assemblies(catalog, klass, horizon, max_workers=max_workers)
        report = rank_assemblies(assemblies, klass.name, horizon)
        rankings[horizon] = tuple(a.key for a in report.ranking)
    return RankStabilityReport(klass=klass.name, horizons=tuple(horizons), rankings=rankings)


# ---------------------------------------------------------------------------
# Catalog documents
# ---------------------------------------------------------------------------

_COMPONENT_KEYS = {
    "id",
    "kind",
    "vendor",
    "generation",
    "spec",
    "fab_profile",
    "embodied_carbon_gco2eq",
    "performance_score",
    "attributes",
}


def _parse_component(obj: Mapping, index: int) -> Component:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"catalog.components[{index}]: expected an object")
    cid = str(obj.get("id", f"components[{index}]"))
    for key in obj:
        if key not in _COMPONENT_KEYS:
            raise SchemaError(f"component {cid!r}: unknown key {key!r}")
    for key in _COMPONENT_KEYS - {"attributes", "vendor", "generation"}:
        if key not in obj:
            raise SchemaError(f"component {cid!r}: {key!r} is required")
    attributes_obj = obj.get("attributes", {})
    if not isinstance(attributes_obj, Mapping):
        raise SchemaError(f"component {cid!r}: attributes must be an object")
    spec = parse_spec(obj["spec"], f"component {cid!r} spec")
    kind = HardwareKind.parse(str(obj["kind"]))
    if kind is not spec.kind:
        raise SchemaError(f"component {cid!r}: kind does not match its spec kind")
    return Component(
        id=cid,
        kind=kind,
        vendor=str(obj.get("vendor", "")),
        generation=int(obj.get("generation", 0)),
        spec=spec,
        fab_profile=str(obj["fab_profile"]),
        embodied_carbon_gco2eq=float(obj["embodied_carbon_gco2eq"]),
        performance_score=float(obj["performance_score"]),
        attributes={str(k): str(v) for k, v in attributes_obj.items()},
    )


def parse_catalog(obj_or_text) -> Catalog:
    obj = json.loads(obj_or_text) if isinstance(obj_or_text, (str, bytes)) else obj_or_text
    if not isinstance(obj, Mapping):
        raise SchemaError("catalog: expected a top-level object")
    for key in obj:
        if key not in {"components", "profiles"}:
            raise SchemaError(f"catalog: unknown key {key!r}")
    components_obj = obj.get("components")
    if not isinstance(components_obj, list) or not components_obj:
        raise SchemaError("catalog.components: expected a non-empty list")
    components = tuple(
        _parse_component(entry, i) for i, entry in enumerate(components_obj)
    )
    seen: set[str] = set()
    for component in components:
        if component.id in seen:
            raise SchemaError(f"component {component.id!r}: duplicate id")
        seen.add(component.id)
    profiles: dict[str, FabProfile] = {}
    for i, profile_obj in enumerate(obj.get("profiles", [])):
        profile = parse_profile(profile_obj)
        if profile.name in profiles:
            raise SchemaError(f"catalog.profiles[{i}]: duplicate profile {profile.name!r}")
        profiles[profile.name] = profile
    return Catalog(components=components, profiles=profiles)
