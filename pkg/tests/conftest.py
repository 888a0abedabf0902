"""Shared fixtures and the acceptance summary printer."""
from __future__ import annotations

import pytest

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = report.user_properties and dict(report.user_properties).get("criterion")
    if crit:
        cid, text = crit
        _CRITERIA[cid] = ("pass" if report.passed else "fail", text)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker and ("criterion", tuple(marker.args)) not in item.user_properties:
        item.user_properties.append(("criterion", tuple(marker.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c[1:])):
        status, text = _CRITERIA[cid]
        terminalreporter.write_line(f"{cid} {status.upper()} {text}")
