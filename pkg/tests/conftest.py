from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cubicforms import kernel
from cubicforms.cubicmap import CoeffTensor
from cubicforms.polyalg import Monomial, MultiPoly

BACKENDS = ["python", "cython"]


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per product kernel."""
    if request.param == "cython":
        compiled = kernel.compiled_mul_terms()
        if compiled is None:
            pytest.skip("compiled kernel not built")
        monkeypatch.setattr(kernel, "mul_terms", compiled)
    else:
        monkeypatch.setattr(kernel, "mul_terms", kernel.python_mul_terms)
    return request.param


@pytest.fixture
def f0_tensor():
    return CoeffTensor.from_components([[1, 0, 0, 0], [0, 0, 0, 1]])


fractions_st = st.builds(
    Fraction, st.integers(min_value=-9, max_value=9), st.integers(min_value=1, max_value=9)
)


def polys(variables=("x1", "x2", "z1", "z2"), max_degree=4, max_terms=6):
    monomial = st.lists(
        st.sampled_from(variables), min_size=0, max_size=max_degree
    ).map(lambda names: Monomial([(n, 1) for n in names]))
    return st.dictionaries(monomial, fractions_st, max_size=max_terms).map(MultiPoly)


# -- acceptance reporting ------------------------------------------------------

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str = ""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        _CRITERIA[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
