import json
import math
from pathlib import Path

import pytest

from adaptive_pursuit import build_trajectory
from adaptive_pursuit.tracks import circle_points, gen_track

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def derived():
    return json.loads((FIXTURES / "derived_values.json").read_text())


@pytest.fixture(scope="session")
def unit_square():
    return build_trajectory([(0, 0), (1, 0), (1, 1), (0, 1)])


def circle(radius, n):
    return build_trajectory(
        [(radius * math.cos(2 * math.pi * k / n), radius * math.sin(2 * math.pi * k / n)) for k in range(n)]
    )


@pytest.fixture(scope="session")
def circle_360():
    return circle(3.0, 360)


@pytest.fixture(scope="session")
def circle_1000():
    return circle(3.0, 1000)


@pytest.fixture(scope="session")
def hairpin():
    return gen_track("hairpin_circuit")


@pytest.fixture(scope="session")
def oval():
    return gen_track("oval")


# -- acceptance report: one PASS/FAIL line per criterion ----------------------

_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("acceptance") is None:
        return
    name = item.name.removeprefix("test_")
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE[name] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
