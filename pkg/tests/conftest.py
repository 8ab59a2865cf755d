import os

import pytest
from hypothesis import HealthCheck, settings

from qkan import fixtures

settings.register_profile(
    "qkan", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "qkan"))


@pytest.fixture(params=fixtures.CORE)
def core_base(request):
    return fixtures.quantale(request.param)


@pytest.fixture
def two():
    return fixtures.two()


@pytest.fixture
def godel3():
    return fixtures.quantale("godel-3")


@pytest.fixture
def luk3():
    return fixtures.quantale("lukasiewicz-3")
