import pytest

from weyl_equidist.scenario import load_scenario

_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n = _CRITERIA_BY_NODE.get(report.nodeid)
    if n is not None:
        if hasattr(report, "wasxfail"):
            outcome = "literal clause unattainable: " + report.wasxfail.removeprefix("reason: ")
        else:
            outcome = report.outcome
        _CRITERIA.setdefault(n, []).append((report.nodeid.split("::")[-1], outcome))


_CRITERIA_BY_NODE: dict[str, int] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA_BY_NODE[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        ok = all(o == "passed" for _, o in parts)
        notes = [f"{name}: {o}" for name, o in parts if o != "passed"]
        tail = f"  ({'; '.join(notes)})" if notes else ""
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}{tail}")


@pytest.fixture(scope="session")
def a1z2():
    s = load_scenario("builtin:a1_root_z2")
    return s.datum(), s.action()


@pytest.fixture(scope="session")
def a1w():
    s = load_scenario("builtin:a1_weight_z2")
    return s.datum(), s.action()


@pytest.fixture(scope="session")
def a2z3():
    s = load_scenario("builtin:a2_root_z3")
    return s.datum(), s.action()
