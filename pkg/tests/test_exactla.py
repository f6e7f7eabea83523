from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcontact.errors import NotNilpotentError
from nilcontact.exactla import (Matrix, Subspace, determinant, format_rational, inverse, kernel,
                                nilpotent_exp, parse_rational, solve)
from nilcontact.filiform import model_filiform


def test_parse_rational_forms():
    assert parse_rational("3") == 3
    assert parse_rational("-2/4") == Fraction(-1, 2)
    assert parse_rational("−5/3") == Fraction(-5, 3)
    assert format_rational(Fraction(6, -4)) == "-3/2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_kernel_identity_is_zero():
    assert kernel(Matrix.identity(3)).dim == 0


def test_kernel_zero_matrix_is_full():
    assert kernel(Matrix.zeros(2, 3)) == Subspace.full(3)


def test_kernel_rank_one():
    assert kernel(Matrix.from_rows([[1, 2], [2, 4]])) == Subspace.span([(-2, 1)], 2)


def test_solve_identity():
    sol = solve(Matrix.identity(3), [1, 2, 3])
    assert sol.particular == (1, 2, 3) and sol.homogeneous.dim == 0


def test_solve_underdetermined():
    sol = solve(Matrix.from_rows([[1, 1]]), [2])
    assert sol.particular == (2, 0)
    assert sol.homogeneous == Subspace.span([(-1, 1)], 2)


def test_solve_inconsistent():
    assert solve(Matrix.from_rows([[1], [2]]), [1, 1]) is None


def test_nilpotent_exp_zero_is_identity():
    assert nilpotent_exp(Matrix.zeros(4, 4)) == Matrix.identity(4)


def test_nilpotent_exp_two_terms():
    E = Matrix.from_rows([[0, 5], [0, 0]])
    assert nilpotent_exp(E) == Matrix.identity(2) + E


def test_nilpotent_exp_on_L3():
    # storage order X0..X3; exp(-a ad X0) sends X1 to X1 - a X2 + a^2/2 X3
    L3 = model_filiform(3)
    a = Fraction(3)
    m = nilpotent_exp(L3.ad((1, 0, 0, 0)).scale(-a))
    assert m.column(1) == (0, 1, -a, a * a / 2)


def test_nilpotent_exp_rejects_non_nilpotent():
    with pytest.raises(NotNilpotentError):
        nilpotent_exp(Matrix.identity(2))


def test_inverse_and_determinant():
    m = Matrix.from_rows([[2, 1], [7, 4]])
    assert determinant(m) == 1
    assert m @ inverse(m) == Matrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix.from_rows([[1, 2], [2, 4]]))


def test_subspace_canonical_and_coordinates():
    a = Subspace.span([(1, 1, 0), (0, 1, 1)], 3)
    b = Subspace.span([(1, 2, 1), (1, 0, -1)], 3)
    assert a == b
    assert a.contains((2, 3, 1))
    assert not a.contains((1, 0, 0))
    v = (3, 5, 2)
    c = a.coordinates(v)
    assert tuple(sum(ci * bi[t] for ci, bi in zip(c, a.basis)) for t in range(3)) == v


small = st.integers(-4, 4)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    assert m.rank() + kernel(m).dim == m.ncols
    for v in kernel(m).basis:
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_exp_of_strictly_upper_is_invertible(rows):
    n = len(rows)
    m = Matrix.from_rows([[x if j > i else 0 for j, x in enumerate(r)] for i, r in enumerate(rows)])
    assert nilpotent_exp(m) @ nilpotent_exp(-m) == Matrix.identity(n)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_consistency(rows, x):
    m = Matrix.from_rows(rows)
    rhs = m.apply(x[:m.ncols])
    sol = solve(m, rhs)
    assert sol is not None and m.apply(sol.particular) == rhs
