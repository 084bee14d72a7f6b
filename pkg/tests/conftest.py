from __future__ import annotations

from collections import defaultdict

import pytest

_CRITERIA: dict[int, str] = {}
_OUTCOMES: dict[int, list[bool]] = defaultdict(list)
_NODES: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion tag")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, label = mark.args
            _CRITERIA[number] = label
            _NODES[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _NODES.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.failed:
        _OUTCOMES[number].append(report.passed and not report.skipped)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        results = _OUTCOMES.get(number, [])
        verdict = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number} ({_CRITERIA[number]}): {verdict}")


@pytest.fixture(scope="session")
def compare_table():
    from photon_blockade.cli.config import Config
    from photon_blockade.cli.runners import run_compare

    return run_compare(Config.parse(""), workers=4)
