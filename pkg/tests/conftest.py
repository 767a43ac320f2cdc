import os
import random
import tempfile

# the engine binds to VALRING_CACHE at import time
os.environ.setdefault("VALRING_CACHE", tempfile.mkdtemp(prefix="valring-test-"))

import pytest  # noqa: E402
from hypothesis import HealthCheck, settings  # noqa: E402

from valring.fields import make_field  # noqa: E402

settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def q5():
    return make_field("Qp:5")


@pytest.fixture
def q3():
    return make_field("Qp:3")


@pytest.fixture
def q2():
    return make_field("Qp:2")


@pytest.fixture
def f5():
    return make_field("Fq:5^1")


@pytest.fixture
def f4():
    return make_field("Fq:2^2")


@pytest.fixture
def laurent2():
    return make_field("Laurent:2^1")


@pytest.fixture
def laurent4():
    return make_field("Laurent:2^2")


@pytest.fixture
def sqrt2():
    return make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]")
