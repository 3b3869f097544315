"""Shared fixtures and the per-criterion acceptance summary."""
from __future__ import annotations

import re
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_outcomes: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def policy_p() -> str:
    return (FIXTURES / "P.xml").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def policy_q() -> str:
    return (FIXTURES / "Q.xml").read_text(encoding="utf-8")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n, label = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            status = "SOFT-FAIL"
        elif report.outcome == "passed":
            status = "PASS"
        elif report.outcome == "skipped":
            status = "SKIP"
        else:
            status = "FAIL"
        prev = _outcomes.get(n)
        if prev is None or prev[0] == "PASS":
            _outcomes[n] = (status, label)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        status, label = _outcomes[n]
        terminalreporter.write_line(f"criterion {n}: {status:9s} {label}")
