"""Fitting base usage coefficients from geo-tagged release records.

The workflow mirrors how public toxic-release inventories are used:
records near a facility are split into facility-co-located rows and a
surrounding neighborhood, the neighborhood mean is subtracted as a
baseline, and the remaining attributable masses feed a nonnegative linear
fit of the per-source base coefficients.  Released mass is linear in every
coefficient, so the fit is a single NNLS solve over (year, compound)
equations.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import warnings as _warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from .engine import released_mass_per_unit_per_k
from .errors import CalibrationError, InvalidValueError, SchemaError
from .geometry import HardwareSpec, parse_spec
from .profile import FabProfile
from .usage import SourceId

EARTH_RADIUS_MILES = 3958.7613

# Records within this distance of the site count as the facility itself;
# public registries jitter coordinates, so exact equality is too strict.
FACILITY_TOLERANCE_MILES = 0.25


class CalibrationWarning(UserWarning):
    """Non-fatal calibration condition (clamped mass, shared compounds...)."""


class BaselineMode(enum.Enum):
    """How the neighborhood baseline is aggregated before subtraction."""

    MEAN_PER_RECORD = "mean_per_record"
    TOTAL_OVER_AREA = "total_over_area"


@dataclass(frozen=True)
class EmissionRecord:
    """One geo-tagged release: a compound mass at a location in a year."""

    latitude: float
    longitude: float
    year: int
    compound: str
    mass_g: float

    def __post_init__(self) -> None:
        _check_coordinates(self.latitude, self.longitude, "record")
        if self.mass_g < 0:
            raise InvalidValueError("record.mass_g", f"must be >= 0, got {self.mass_g}")


@dataclass(frozen=True)
class FacilitySite:
    """A fab's location plus its production history and product specs."""

    latitude: float
    longitude: float
    units_produced_per_year: Mapping[int, float]
    product_specs: Mapping[int, HardwareSpec]

    def __post_init__(self) -> None:
        _check_coordinates(self.latitude, self.longitude, "site")
        for year, count in self.units_produced_per_year.items():
            if count < 0:
                raise InvalidValueError(f"site.units_produced_per_year.{year}", "must be >= 0")
            if year not in self.product_specs:
                raise SchemaError(f"site: no product spec for production year {year}")


def _check_coordinates(lat: float, lon: float, context: str) -> None:
    if not -90 <= lat <= 90:
        raise InvalidValueError(f"{context}.latitude", f"must be in [-90, 90], got {lat}")
    if not -180 <= lon <= 180:
        raise InvalidValueError(f"{context}.longitude", f"must be in [-180, 180], got {lon}")


def haversine_miles(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in miles."""
    _check_coordinates(lat1, lon1, "a")
    _check_coordinates(lat2, lon2, "b")
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return EARTH_RADIUS_MILES * 2 * math.atan2(math.sqrt(a), math.sqrt(1 - a))


def baseline_subtract(
    records: Sequence[EmissionRecord],
    site: FacilitySite,
    year: int,
    compound: str,
    radius_miles: float = 10.0,
    mode: BaselineMode = BaselineMode.MEAN_PER_RECORD,
) -> float:
    """Facility mass minus the neighborhood baseline, clamped at zero.

    The facility mass sums records within FACILITY_TOLERANCE_MILES of the
    site.  The default baseline is the arithmetic mean of non-facility
    record masses inside ``radius_miles``; TOTAL_OVER_AREA instead spreads
    the neighborhood total uniformly over the annulus and charges the
    facility disc its area share.
    """
    relevant = [r for r in records if r.year == year and r.compound == compound]
    if not relevant:
        raise CalibrationError(f"no records for year {year}, compound {compound!r}")
    facility_masses: list[float] = []
    neighbor_masses: list[float] = []
    for record in relevant:
        distance = haversine_miles(site.latitude, site.longitude, record.latitude, record.longitude)
        if distance <= FACILITY_TOLERANCE_MILES:
            facility_masses.append(record.mass_g)
        elif distance <= radius_miles:
            neighbor_masses.append(record.mass_g)
    if not facility_masses:
        raise CalibrationError(
            f"no facility-co-located records for year {year}, compound {compound!r} "
            f"(within {FACILITY_TOLERANCE_MILES} miles of the site)"
        )
    # fsum is exactly rounded, which keeps the result independent of the
    # record ordering.
    facility_mass = math.fsum(facility_masses)
    if not neighbor_masses:
        baseline = 0.0
    elif mode is BaselineMode.MEAN_PER_RECORD:
        baseline = math.fsum(neighbor_masses) / len(neighbor_masses)
    else:
        annulus = math.pi * (radius_miles**2 - FACILITY_TOLERANCE_MILES**2)
        density = math.fsum(neighbor_masses) / annulus
        baseline = density * math.pi * FACILITY_TOLERANCE_MILES**2
    attributable = facility_mass - baseline
    if attributable < 0:
        _warnings.warn(
            f"baseline exceeds facility mass for year {year}, compound {compound!r} "
            f"({facility_mass:.6g} g - {baseline:.6g} g); clamping to zero",
            CalibrationWarning,
            stacklevel=2,
        )
        return 0.0
    return attributable


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted coefficients with the fit quality and bookkeeping."""

    coefficients: Mapping[SourceId, float]
    residual: float
    records_used: int
    warnings: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "coefficients": {s.value: k for s, k in self.coefficients.items()},
            "residual_rms_relative": self.residual,
            "records_used": self.records_used,
            "warnings": list(self.warnings),
        }

    def filled_profile(self, template: FabProfile, name: str | None = None) -> FabProfile:
        profile = template.with_coefficients(self.coefficients)
        if name is not None:
            from dataclasses import replace

            profile = replace(profile, name=name)
        return profile


def released_compound_masses(profile: FabProfile, site: FacilitySite, year: int) -> dict[str, float]:
    """Modeled grams of each compound a site releases in one year.

    Forward model for synthetic fixtures and residual checks: per source,
    units x k x released-mass-per-unit-per-k, spread over the source's
    compounds by its mix shares.
    """
    spec = site.product_specs[year]
    units = site.units_produced_per_year[year]
    masses: dict[str, float] = {}
    for source in SourceId:
        params = profile.source(source)
        if params.k is None:
            raise CalibrationError(
                f"profile {profile.name!r}: source {source.value!r} has no coefficient"
            )
        source_mass = units * params.k * released_mass_per_unit_per_k(spec, profile, source)
        for compound, share in params.compound_shares().items():
            masses[compound] = masses.get(compound, 0.0) + source_mass * share
    return masses


def fit_base_coefficients(
    attributable: Mapping[tuple[int, str], float],
    site: FacilitySite,
    template: FabProfile,
    records_used: int = 0,
    extra_warnings: Iterable[str] = (),
) -> CalibrationResult:
    """Solve for the unknown base coefficients by nonnegative least squares.

    Each (year, compound) attributable mass gives one linear equation in
    the unknown coefficients; compounds shared between sources are resolved
    jointly by the solve rather than split up front.
    """
    unknowns = template.unfilled_sources()
    if not unknowns:
        raise CalibrationError("template has no unknown coefficients to fit")
    rows = sorted(attributable)
    for (year, _compound) in rows:
        if year not in site.units_produced_per_year:
            raise CalibrationError(f"no production data for record year {year}")

    messages = list(extra_warnings)
    shares = {source: template.source(source).compound_shares() for source in SourceId}
    compound_users: dict[str, list[SourceId]] = {}
    for source in SourceId:
        for compound in shares[source]:
            compound_users.setdefault(compound, []).append(source)
    for compound, users in sorted(compound_users.items()):
        if len(users) > 1 and any(u in unknowns for u in users):
            names = ", ".join(u.value for u in users)
            messages.append(
                f"compound {compound} is used by several sources ({names}); "
                "allocation resolved jointly by the least-squares solve"
            )

    per_k_cache: dict[tuple[int, SourceId], float] = {}

    def per_k(year: int, source: SourceId) -> float:
        key = (year, source)
        if key not in per_k_cache:
            spec = site.product_specs[year]
            units = site.units_produced_per_year[year]
            per_k_cache[key] = units * released_mass_per_unit_per_k(spec, template, source)
        return per_k_cache[key]

    a = np.zeros((len(rows), len(unknowns)))
    observed = np.zeros(len(rows))
    known = np.zeros(len(rows))
    for r, (year, compound) in enumerate(rows):
        observed[r] = attributable[(year, compound)]
        for source in SourceId:
            weight = shares[source].get(compound)
            if weight is None:
                continue
            contribution = per_k(year, source) * weight
            if source in unknowns:
                a[r, unknowns.index(source)] = contribution
            else:
                known[r] += template.source(source).k * contribution

    if len(rows) < len(unknowns):
        raise CalibrationError(
            f"under-determined system: {len(rows)} observations for "
            f"{len(unknowns)} unknown coefficients "
            f"({', '.join(s.value for s in unknowns)})"
        )
    uncovered = [
        source.value for j, source in enumerate(unknowns) if not np.any(a[:, j] > 0)
    ]
    if uncovered:
        raise CalibrationError(
            "no observations constrain the coefficients for: " + ", ".join(uncovered)
        )

    solution, _ = nnls(a, observed - known)
    # Fit quality against the original masses, with the full reconstruction
    # (known plus fitted contributions).
    predicted = a @ solution + known
    rel_errors = [
        (predicted[r] - observed[r]) / observed[r]
        for r in range(len(rows))
        if observed[r] > 0
    ]
    residual = math.sqrt(sum(e * e for e in rel_errors) / len(rel_errors)) if rel_errors else 0.0

    coefficients = {source: float(solution[j]) for j, source in enumerate(unknowns)}
    return CalibrationResult(
        coefficients=coefficients,
        residual=residual,
        records_used=records_used,
        warnings=tuple(messages),
    )


def calibrate_from_records(
    records: Sequence[EmissionRecord],
    site: FacilitySite,
    template: FabProfile,
    radius_miles: float = 10.0,
    mode: BaselineMode = BaselineMode.MEAN_PER_RECORD,
) -> CalibrationResult:
    """records -> baseline subtraction -> coefficient fit, in one call.

    All production years are pooled into a single least-squares system.
    Only (year, compound) groups with at least one facility-co-located
    record become equations; purely-neighborhood groups are not the
    facility's emissions.
    """
    if not records:
        raise CalibrationError("no records")
    production_years = set(site.units_produced_per_year)
    collected: list[str] = []
    attributable: dict[tuple[int, str], float] = {}
    records_used = 0
    skipped_years = sorted({r.year for r in records} - production_years)
    if skipped_years:
        collected.append(
            "ignoring record years without production data: "
            + ", ".join(str(y) for y in skipped_years)
        )

    groups = sorted(
        {(r.year, r.compound) for r in records if r.year in production_years}
    )
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always", CalibrationWarning)
        for year, compound in groups:
            has_facility = any(
                r.year == year
                and r.compound == compound
                and haversine_miles(site.latitude, site.longitude, r.latitude, r.longitude)
                <= FACILITY_TOLERANCE_MILES
                for r in records
            )
            if not has_facility:
                collected.append(
                    f"no facility-co-located records for year {year}, "
                    f"compound {compound}; group skipped"
                )
                continue
            attributable[(year, compound)] = baseline_subtract(
                records, site, year, compound, radius_miles=radius_miles, mode=mode
            )
            records_used += sum(
                1
                for r in records
                if r.year == year
                and r.compound == compound
                and haversine_miles(site.latitude, site.longitude, r.latitude, r.longitude)
                <= radius_miles
            )
    collected.extend(str(w.message) for w in caught)

    if not attributable:
        raise CalibrationError("no facility-attributable records found")
    return fit_base_coefficients(
        attributable, site, template, records_used=records_used, extra_warnings=collected
    )


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------

RECORDS_CSV_HEADER = ["lat", "lon", "year", "compound", "mass_g"]


def parse_records_csv(text: str) -> list[EmissionRecord]:
    """Parse the record CSV (header lat,lon,year,compound,mass_g, '.' decimals)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("records: empty file (expected a header row)")
    if [h.strip() for h in header] != RECORDS_CSV_HEADER:
        raise SchemaError(
            f"records: expected header {','.join(RECORDS_CSV_HEADER)!r}, got {','.join(header)!r}"
        )
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5:
            raise SchemaError(f"records line {lineno}: expected 5 fields, got {len(row)}")
        try:
            rows.append(
                EmissionRecord(
                    latitude=float(row[0]),
                    longitude=float(row[1]),
                    year=int(row[2]),
                    compound=row[3].strip(),
                    mass_g=float(row[4]),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"records line {lineno}: {exc}")
    return rows


_SITE_KEYS = {"latitude", "longitude", "units_produced_per_year", "product_specs"}


def parse_site(obj: Mapping) -> FacilitySite:
    if not isinstance(obj, Mapping):
        raise SchemaError("site: expected an object")
    for key in obj:
        if key not in _SITE_KEYS:
            raise SchemaError(f"site: unknown key {key!r}")
    for key in _SITE_KEYS:
        if key not in obj:
            raise SchemaError(f"site: {key!r} is required")
    units_obj = obj["units_produced_per_year"]
    specs_obj = obj["product_specs"]
    if not isinstance(units_obj, Mapping) or not isinstance(specs_obj, Mapping):
        raise SchemaError("site: units_produced_per_year and product_specs must be objects")

    def _year(raw: str, context: str) -> int:
        try:
            return int(raw)
        except ValueError:
            raise SchemaError(f"{context}: year keys must be integers, got {raw!r}")

    units = {
        _year(str(y), "site.units_produced_per_year"): float(count)
        for y, count in units_obj.items()
    }
    specs = {
        _year(str(y), "site.product_specs"): parse_spec(
            spec_obj, f"site.product_specs.{y}"
        )
        for y, spec_obj in specs_obj.items()
    }
    return FacilitySite(
        latitude=float(obj["latitude"]),
        longitude=float(obj["longitude"]),
        units_produced_per_year=units,
        product_specs=specs,
    )
