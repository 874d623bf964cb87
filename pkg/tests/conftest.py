"""Shared fixtures and the acceptance-criterion summary.

Acceptance tests carry ``@pytest.mark.criterion(number, title)``.  The
outcome of each such test is collected here and printed as one PASS/FAIL
(or SKIP) line per criterion at the end of the run, together with any
detail the test attached through the ``report`` fixture.
"""

from __future__ import annotations

import numpy as np
import pytest

_OUTCOMES: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def report(request):
    """Attach measured values to the criterion summary line."""
    marker = request.node.get_closest_marker("criterion")
    details: list[str] = []
    if marker is not None:
        entry = _OUTCOMES.setdefault(marker.args[0], {"title": marker.args[1], "details": []})
        details = entry["details"]

    def add(text: str) -> None:
        details.append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    entry = _OUTCOMES.setdefault(marker.args[0], {"title": marker.args[1], "details": []})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if rep.skipped:
            status = "SKIP"
        else:
            status = "PASS" if rep.passed else "FAIL"
        prev = entry.get("status")
        # several tests may share a criterion: any failure wins, then pass, then skip
        rank = {"FAIL": 2, "PASS": 1, "SKIP": 0}
        if prev is None or rank[status] > rank[prev]:
            entry["status"] = status


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        entry = _OUTCOMES[number]
        status = entry.get("status", "NOT RUN")
        detail = "; ".join(entry["details"])
        line = f"criterion {number}: {status}  {entry['title']}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
