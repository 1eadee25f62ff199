import pytest

from xq.core import Fbdd, Inner, Perceptron

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, text = marker.args
        if hasattr(report, "wasxfail"):
            status = "FAIL (known, see xfail reason)"
        else:
            status = "PASS" if report.passed else "FAIL"
        _acceptance.append((number, text, status, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, status, name in sorted(_acceptance, key=lambda r: (r[0], r[3])):
        terminalreporter.write_line(f"criterion {number} [{status}] {text} ({name})")


@pytest.fixture
def f1():
    """x1 or x2 as a two-node diagram."""
    return Fbdd({1: Inner(1, 2, "T"), 2: Inner(2, "F", "T")}, 1, 2)


@pytest.fixture
def p1():
    return Perceptron((3, -5, -2), 1)
