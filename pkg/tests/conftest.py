import pytest

from infercost.fixtures import backsolved_pricing, table1_records, table2_records

_criteria = {}


@pytest.fixture(scope="session")
def table1():
    return table1_records()


@pytest.fixture(scope="session")
def table2():
    return table2_records()


@pytest.fixture(scope="session")
def pricing():
    return backsolved_pricing()


@pytest.fixture(scope="session")
def inception(table1):
    return [r for r in table1 if r.workload_id == "inceptionv3"]


@pytest.fixture(scope="session")
def unet(table1):
    return [r for r in table1 if r.workload_id == "unet"]


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    n, text = marker
    ok = _criteria.get(n, (text, True))[1]
    _criteria[n] = (text, ok and not report.failed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
