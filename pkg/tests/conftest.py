import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sparse_recover.synthetic import make_rng

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return make_rng(20240611)


def distinct(values, gap=1e-6):
    v = np.sort(np.asarray(values, dtype=float))
    return v.size < 2 or np.min(np.diff(v)) > gap


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
