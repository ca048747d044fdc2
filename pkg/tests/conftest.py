import pytest
from hypothesis import settings

from spanroute.graph import enumerate_paths
from spanroute.networks import BUNDLED, diamond, parallel_serial, wheatstone

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def diamond_paths():
    return enumerate_paths(diamond())


@pytest.fixture(scope="session")
def ps_paths():
    return enumerate_paths(parallel_serial())


@pytest.fixture(scope="session")
def wheatstone_paths():
    return enumerate_paths(wheatstone())


@pytest.fixture(params=sorted(BUNDLED))
def bundled(request):
    return BUNDLED[request.param]()


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def _report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
