import random

import pytest
from hypothesis import HealthCheck, settings

from coverimages import fixtures

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def counterexample():
    return fixtures.counterexample_category()


@pytest.fixture
def rng():
    return random.Random(1234)


def idem_pullback_cospan():
    """The cospan ``(e, e)`` in the idempotent monoid, which has no pullback."""
    return fixtures.idempotent_monoid(), ("e", "e")
