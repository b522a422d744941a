import pytest
from hypothesis import HealthCheck, settings

from forcing.ring import GradedRing

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cubic7():
    return GradedRing.parse(7, "x^3 + y^3 + z^3")


@pytest.fixture(scope="session")
def cubic2():
    return GradedRing.parse(2, "x^3 + y^3 + z^3")


@pytest.fixture(scope="session")
def quartic5():
    return GradedRing.parse(5, "x^4 + y^4 + z^4")


@pytest.fixture(scope="session")
def plane5():
    return GradedRing.parse(5, None, ("x", "y"))
