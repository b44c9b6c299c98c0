import pytest
from hypothesis import settings

from glimmreact.cases import U1_BACKGROUND, U2_BACKGROUND, default_gas
from glimmreact.gas import GasModel

# numba compiles on first call, so per-example deadlines are meaningless
settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE = {}


@pytest.fixture
def gas():
    return GasModel()


@pytest.fixture
def reacting_gas():
    return default_gas(True)


@pytest.fixture
def U1():
    return U1_BACKGROUND


@pytest.fixture
def U2():
    return U2_BACKGROUND


@pytest.fixture
def record():
    def _record(number: int, passed: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE[number] = line
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
