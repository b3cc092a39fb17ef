"""Shared fixtures and the per-criterion summary of the acceptance suite."""

import pytest

_OUTCOMES = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.failed:
        number, title = marker
        prev = _OUTCOMES.get(number, (title, True))
        _OUTCOMES[number] = (title, prev[1] and report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, ok = _OUTCOMES[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def fixtures_dir():
    from pathlib import Path
    return Path(__file__).resolve().parents[1] / "fixtures"
