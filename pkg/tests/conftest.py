import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_ACCEPTANCE: list[str] = []
SESSION_START = time.perf_counter()


@pytest.fixture
def acceptance_line():
    """Record a one-line pass/fail verdict for the terminal summary."""

    def record(number: int, ok: bool, text: str) -> None:
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
        terminalreporter.write_line(f"suite wall time: {time.perf_counter() - SESSION_START:.1f} s")
