import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fricke.freegroup import Word

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE: list = []


def units(n: int, min_size: int = 0, max_size: int = 6):
    letters = st.integers(1, n).flatmap(lambda g: st.sampled_from((g, -g)))
    return st.lists(letters, min_size=min_size, max_size=max_size)


def words(n: int, min_size: int = 0, max_size: int = 6):
    return units(n, min_size, max_size).map(lambda u: Word.from_units(n, u))


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(label: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
