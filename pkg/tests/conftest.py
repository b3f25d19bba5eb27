import pytest

from ptspectra.experiments import IX3, TABLE1_LADDER, reproduce_table1
from ptspectra.truncation import run_ladder


@pytest.fixture(scope="session")
def ix3_ladder():
    return run_ladder(IX3, TABLE1_LADDER)


@pytest.fixture(scope="session")
def table1():
    return reproduce_table1()


_RESULTS = {}


class _Criterion:
    def __init__(self, number, text):
        self.number, self.text, self.detail = number, text, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        passed = exc_type is None
        _RESULTS[self.number] = (passed, self.text, self.detail)
        line = f"[criterion {self.number:2d}] {'PASS' if passed else 'FAIL'}: {self.text}"
        print(line + (f" ({self.detail})" if self.detail else ""))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        passed, text, detail = _RESULTS[number]
        line = f"{number:2d} {'PASS' if passed else 'FAIL'}  {text}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
