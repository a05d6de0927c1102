from __future__ import annotations

import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

SUITE_BUDGET_S = 300.0
_ACCEPTANCE: dict[str, str] = {}
_START = time.monotonic()


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one status line per acceptance criterion for the terminal summary."""

    def record(key: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE[key] = f"[{'PASS' if passed else 'FAIL'}] criterion {key}: {detail}"
        print(_ACCEPTANCE[key])

    return record


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.monotonic() - _START
    session.config._wcslab_elapsed = elapsed
    if elapsed > SUITE_BUDGET_S and session.testscollected > 100:
        # full-suite runtime is itself an acceptance requirement
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
    elapsed = getattr(config, "_wcslab_elapsed", time.monotonic() - _START)
    ok = elapsed <= SUITE_BUDGET_S
    terminalreporter.write_line(
        f"[{'PASS' if ok else 'FAIL'}] criterion 8 (runtime part): session took {elapsed:.1f} s, budget {SUITE_BUDGET_S:.0f} s"
    )
