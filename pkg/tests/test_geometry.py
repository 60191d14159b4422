import math

import pytest
from hypothesis import given, strategies as st

from forgetmenot.errors import InvalidValueError, MissingFeatureError, SchemaError
from forgetmenot.geometry import (
    DieAreaModel,
    HardwareKind,
    HardwareSpec,
    Lithography,
    WaferGeometry,
    die_area,
    parse_spec,
    wafer_area,
    wafers_per_unit,
)

OREGON_GEOMETRY = WaferGeometry(diameter_mm=150.0, usable_fraction=0.95, yield_fraction=0.8)
CPU_MODEL = DieAreaModel(terms={"cores": 4.5, "cache_mb": 0.4})


def _cpu_spec(cores, cache_mb, node=7.0):
    return HardwareSpec(
        kind=HardwareKind.CPU,
        node_nm=node,
        lithography=Lithography.EUV,
        features={"cores": cores, "cache_mb": cache_mb},
        tdp_w=300.0,
        package_size_mm2=2500.0,
    )


class TestDieArea:
    def test_flagship_exact(self):
        assert die_area(_cpu_spec(112, 168), CPU_MODEL) == 571.2

    def test_zero_features(self):
        assert die_area(_cpu_spec(0, 0), CPU_MODEL) == 0.0

    def test_midrange(self):
        assert die_area(_cpu_spec(32, 48), CPU_MODEL) == pytest.approx(4.5 * 32 + 0.4 * 48)

    def test_missing_feature(self):
        spec = HardwareSpec(
            kind=HardwareKind.CPU,
            node_nm=7.0,
            lithography=Lithography.EUV,
            features={"cores": 8},
        )
        with pytest.raises(MissingFeatureError, match="cache_mb"):
            die_area(spec, CPU_MODEL)

    @given(
        cores=st.floats(0, 512),
        cache=st.floats(0, 1024),
        delta=st.floats(0.0, 64.0),
    )
    def test_affine_in_each_feature(self, cores, cache, delta):
        base = die_area(_cpu_spec(cores, cache), CPU_MODEL)
        bumped = die_area(_cpu_spec(cores + delta, cache), CPU_MODEL)
        assert bumped - base == pytest.approx(4.5 * delta, rel=1e-9, abs=1e-9)

    def test_negative_coefficient_rejected(self):
        with pytest.raises(InvalidValueError):
            DieAreaModel(terms={"cores": -1.0})


class TestWaferArea:
    def test_150mm(self):
        assert wafer_area(OREGON_GEOMETRY) == pytest.approx(math.pi * 75.0**2)

    def test_unit_radius(self):
        geom = WaferGeometry(diameter_mm=2.0, usable_fraction=0.5, yield_fraction=0.5)
        assert wafer_area(geom) == pytest.approx(math.pi)

    def test_300mm(self):
        geom = WaferGeometry(diameter_mm=300.0, usable_fraction=0.95, yield_fraction=0.8)
        assert wafer_area(geom) == pytest.approx(math.pi * 150.0**2)


class TestWafersPerUnit:
    def test_flagship_fraction(self):
        value = wafers_per_unit(571.2, OREGON_GEOMETRY)
        # 571.2 / (0.8 * pi * 75^2 * 0.95)
        assert value == pytest.approx(0.0425307, rel=1e-5)
        # Published rounding of the same quantity.
        assert abs(value - 0.04255) / 0.04255 < 1e-3

    def test_full_wafer_consumption(self):
        usable = 0.8 * wafer_area(OREGON_GEOMETRY) * 0.95
        assert wafers_per_unit(usable, OREGON_GEOMETRY) == pytest.approx(1.0)

    def test_midrange_fraction(self):
        denominator = 0.8 * math.pi * 75.0**2 * 0.95
        assert wafers_per_unit(163.2, OREGON_GEOMETRY) == pytest.approx(163.2 / denominator)

    def test_zero_area_rejected(self):
        with pytest.raises(InvalidValueError):
            wafers_per_unit(0.0, OREGON_GEOMETRY)

    @given(area=st.floats(1.0, 5000.0), c=st.floats(0.01, 100.0))
    def test_linear_in_area(self, area, c):
        assert wafers_per_unit(c * area, OREGON_GEOMETRY) == pytest.approx(
            c * wafers_per_unit(area, OREGON_GEOMETRY), rel=1e-12
        )

    @given(
        yield_lo=st.floats(0.2, 0.6),
        yield_hi=st.floats(0.61, 1.0),
        usable=st.floats(0.3, 1.0),
        diameter=st.floats(50.0, 450.0),
    )
    def test_decreasing_in_yield(self, yield_lo, yield_hi, usable, diameter):
        lo = WaferGeometry(diameter, usable, yield_lo)
        hi = WaferGeometry(diameter, usable, yield_hi)
        assert wafers_per_unit(100.0, hi) < wafers_per_unit(100.0, lo)

    def test_decreasing_in_usable_fraction_and_diameter(self):
        base = wafers_per_unit(100.0, OREGON_GEOMETRY)
        more_usable = WaferGeometry(150.0, 0.99, 0.8)
        wider = WaferGeometry(200.0, 0.95, 0.8)
        assert wafers_per_unit(100.0, more_usable) < base
        assert wafers_per_unit(100.0, wider) < base

    def test_multi_wafer_parts_are_legal(self):
        usable = 0.8 * wafer_area(OREGON_GEOMETRY) * 0.95
        assert wafers_per_unit(3 * usable, OREGON_GEOMETRY) == pytest.approx(3.0)


class TestSpecDocuments:
    def test_parse_round_trip(self):
        doc = {
            "kind": "cpu",
            "node_nm": 7.0,
            "lithography": "euv",
            "features": {"cores": 112.0, "cache_mb": 168.0},
            "tdp_w": 300.0,
            "package_size_mm2": 2500.0,
        }
        spec = parse_spec(doc)
        assert spec.to_json_dict() == doc

    def test_unknown_key_rejected(self):
        with pytest.raises(SchemaError, match="sockets"):
            parse_spec(
                {
                    "kind": "cpu",
                    "node_nm": 7.0,
                    "lithography": "euv",
                    "features": {},
                    "sockets": 2,
                }
            )

    def test_invalid_node_rejected(self):
        with pytest.raises(InvalidValueError, match="node_nm"):
            parse_spec(
                {"kind": "cpu", "node_nm": 0.0, "lithography": "euv", "features": {}}
            )

    def test_fractions_validated(self):
        with pytest.raises(InvalidValueError):
            WaferGeometry(diameter_mm=150.0, usable_fraction=1.2, yield_fraction=0.8)
