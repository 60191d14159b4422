import pytest
from hypothesis import HealthCheck, settings

from forgetmenot.catalog import parse_catalog

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
from forgetmenot.geometry import parse_spec
from forgetmenot.presets import FIXTURE_CATALOG, FLAGSHIP_CPU, INTEL_OREGON_PAPER, MIDRANGE_CPU
from forgetmenot.profile import parse_profile


@pytest.fixture()
def oregon_profile():
    return parse_profile(INTEL_OREGON_PAPER)


@pytest.fixture()
def flagship_spec():
    return parse_spec(FLAGSHIP_CPU)


@pytest.fixture()
def midrange_spec():
    return parse_spec(MIDRANGE_CPU)


@pytest.fixture()
def fixture_catalog():
    return parse_catalog(FIXTURE_CATALOG)
