import pytest

from ikedalift.halfint import shimura_eigen_lift
from ikedalift.modforms import eigenforms
from ikedalift.quadforms import HalfIntMatrix

T1 = HalfIntMatrix.parse("[1,1,3,3,0,1,0,0,1,0]")
T2 = HalfIntMatrix.parse("[1,1,4,4,1,1,0,1,1,4]")
T3 = HalfIntMatrix.parse("[2,2,2,2,2,1,0,1,1,2]")


@pytest.fixture(scope="session")
def f12():
    return eigenforms(12, 120)[0]


@pytest.fixture(scope="session")
def f32():
    return eigenforms(32, 120)[0]


@pytest.fixture(scope="session")
def f18():
    return eigenforms(18, 80)[0]


@pytest.fixture(scope="session")
def h12(f12):
    return shimura_eigen_lift(f12, 201)


@pytest.fixture(scope="session")
def h32(f32):
    return shimura_eigen_lift(f32, 201)


@pytest.fixture(scope="session")
def h18(f18):
    return shimura_eigen_lift(f18, 301)


# -- acceptance reporting --------------------------------------------------------

_criteria: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria.setdefault(marker.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        verdict = "PASS" if all(_criteria[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}")
