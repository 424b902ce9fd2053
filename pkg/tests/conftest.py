import time

import pytest

from latorbits.lattice import build_lattice

_RESULTS: list[tuple[int, str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item._elapsed = time.perf_counter() - start


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    _RESULTS.append((number, title, status, getattr(item, "_elapsed", 0.0)))


def pytest_deselected(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _RESULTS.append((number, title, "NOT RUN (deselected)", 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed in sorted(_RESULTS):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({elapsed:.1f} s)")


@pytest.fixture(scope="session")
def u_a2():
    return build_lattice("U+A2")


@pytest.fixture(scope="session")
def u_a3():
    return build_lattice("U+A3")


@pytest.fixture(scope="session")
def two_u_a2():
    return build_lattice("2U+A2")


@pytest.fixture(scope="session")
def ctx_2u_a2(two_u_a2):
    from latorbits.buildings import building_context

    return building_context(two_u_a2)


@pytest.fixture(scope="session")
def gk_lattice():
    return build_lattice("2U+<-6>+<-2>")


@pytest.fixture(scope="session")
def ctx_gk(gk_lattice):
    from latorbits.buildings import building_context

    return building_context(gk_lattice)
