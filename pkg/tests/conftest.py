import pytest
from hypothesis import strategies as st

from rigidlab.exactpoly import Polynomial, VarTable

VARS6 = VarTable(["a", "b", "c", "d", "e", "f"])

_ACCEPTANCE = []


@st.composite
def polynomials(draw, vars=VARS6, max_terms=8, max_exp=3):
    n = len(vars)
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_exp)] * n),
            st.integers(-9, 9).filter(bool),
            max_size=max_terms,
        )
    )
    return Polynomial(vars, terms)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


from hypothesis import settings  # noqa: E402

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")
