import sys

import pytest

from nilcontact.exterior import KForm
from nilcontact.filiform import assemble, model_filiform
from nilcontact.lie import LieAlgebra, heisenberg


@pytest.fixture
def H():
    return heisenberg()


@pytest.fixture
def L4():
    return model_filiform(4)


@pytest.fixture
def L5():
    return model_filiform(5)


@pytest.fixture
def g5():
    """Five-dimensional filiform law with a_{1,4} = 1 (extra bracket [X_1, X_2] = X_4)."""
    return assemble(4, {(1, 4): 1}).algebra


@pytest.fixture
def T6():
    return assemble(6, {(2, 6): 1}).algebra


@pytest.fixture
def n4_1():
    """[X1, X2] = X3, [X1, X3] = X4."""
    return LieAlgebra(4, {(1, 2): {3: 1}, (1, 3): {4: 1}})


def form1(dim, **coeffs):
    """``form1(3, a1=1, a3=2)`` -> alpha_1 + 2 alpha_3."""
    return KForm(dim, 1, {(int(k[1:]),): v for k, v in coeffs.items()})


def form2(dim, terms):
    return KForm(dim, 2, terms)


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")
                and hasattr(m, "RESULTS")), None)
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")

