import pytest
from hypothesis import HealthCheck, settings

from eta_forge.asymmetry import Context
from eta_forge.curvature import random_curvature

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx():
    """Curvature-free-origin sample shared by the symbol tests."""
    return Context(random_curvature(1))


@pytest.fixture(scope="session")
def general_ctx():
    return Context(random_curvature(2), "general")
