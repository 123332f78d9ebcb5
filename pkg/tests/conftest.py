import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", rep.nodeid)
            if m and rep.when == "call":
                rows.append((int(m.group(1)), m.group(2).replace("_", " "), rep.passed))
    if rows:
        terminalreporter.section("acceptance criteria")
        for k, name, ok in sorted(rows):
            terminalreporter.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)
