import csv

import pytest

from isocov import fixture_path
from isocov.io import load_problem

_acceptance_results: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _acceptance_results.append((marker.args[0], "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _acceptance_results:
        terminalreporter.write_line(f"[{status}] {label}")


def read_expected(name):
    with open(fixture_path(name), newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def case_study():
    return load_problem(fixture_path("table1.csv"), fixture_path("table2.json"), hard=True)


@pytest.fixture(scope="session")
def fixture_files():
    return fixture_path("table1.csv"), fixture_path("table2.json")
