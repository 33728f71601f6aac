import os
import random

import pytest
from hypothesis import HealthCheck, settings

from symspec.rings import FieldSpec

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=(HealthCheck.too_slow,))
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=(HealthCheck.too_slow,))
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

QQ = FieldSpec("q")
F101 = FieldSpec("fp", 101)
F1009 = FieldSpec("fp", 1009)

ACCEPTANCE_LINES = []


@pytest.fixture(params=[QQ, F101, F1009], ids=str)
def field(request):
    return request.param


@pytest.fixture
def rng():
    return random.Random(20201)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
