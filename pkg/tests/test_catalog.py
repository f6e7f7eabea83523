from fractions import Fraction

import pytest

from nilcontact.catalog import (FAMILIES, Affine, FamilySpec, ParamSpec, a_as_law, build,
                                family_A, family_B, family_C, family_P, family_Q, family_T,
                                family_W, find_parameters, fingerprint, parameter_count, table,
                                table_entry, torus_derivation, verify_table)
from nilcontact.errors import DimensionError, JacobiError
from nilcontact.exactla import unit_vector
from nilcontact.exterior import KForm
from nilcontact.filiform import assemble, model_filiform
from nilcontact.lie import (abelian, associated_graded, heisenberg, is_filiform,
                            lower_central_series, verify_derivation, verify_jacobi)
from nilcontact.structures import is_symplectic


def X(n, label):
    return unit_vector(n + 1, label)


def test_build_L5():
    g = build(FamilySpec("L", 5))
    assert g == model_filiform(5)
    assert g.structure_constants() == {(1, i + 1): {i + 2: 1} for i in range(1, 5)}


def test_build_W6_coefficient():
    # 6 * 0! * 2! * 2 / 4! = 1; the Y-basis gives the same: X1 = 6 Y2, X3 = 12 Y4,
    # X5 = 144 Y6 and [Y2, Y4] = 2 Y6, so [X1, X3] = 144 Y6 = X5
    g = build(FamilySpec("W", 6))
    assert g.basis_bracket(1, 3)[5] == 1
    y = family_W(6, "Y")
    assert y.basis_bracket(1, 3)[5] == 2
    assert g.basis_bracket(2, 3)[6] == Fraction(6 * 1 * 2 * 1, 120)


def test_build_C_accepts_any_parameters():
    g = build(FamilySpec("C", 7, params=(Fraction(1), Fraction(1))))
    assert verify_jacobi(g) == [] and is_filiform(g)
    g = build(FamilySpec("C", 9, params=(Fraction(2), Fraction(-3), Fraction(5, 7))))
    assert verify_jacobi(g) == []


def test_build_rejects_unknown_and_invalid():
    with pytest.raises(ValueError):
        build(FamilySpec("Z", 5))
    with pytest.raises(ValueError):
        build(FamilySpec("A", 7))
    with pytest.raises(DimensionError):
        family_Q(6)
    with pytest.raises(DimensionError):
        family_P(7)
    with pytest.raises(DimensionError):
        family_B(8, 1, (1,))


def test_build_B_reports_jacobi_failure():
    # no valid vector over {-1, 0, 1} exists for B^1 on n = 7
    assert find_parameters("B", 7, 1) == []
    with pytest.raises(JacobiError):
        family_B(7, 1, (1, 0))


@pytest.mark.parametrize("name", ["L", "Q", "R", "W", "T", "P"])
def test_simple_families_are_filiform(name):
    ns = {"Q": (5, 7, 9, 11), "P": (6, 8, 10, 12)}.get(name, range(4 if name == "T" else 3, 13))
    for n in ns:
        g = build(FamilySpec(name, n))
        assert verify_jacobi(g) == [] and is_filiform(g), (name, n)


def test_graded_type_of_families():
    for n in (5, 7, 9):
        assert associated_graded(family_Q(n)).kind == "Q"
    for n in (6, 8):
        for f in ("R", "W", "T"):
            assert associated_graded(build(FamilySpec(f, n))).kind == "L"


@pytest.mark.parametrize("n", [6, 7, 8, 9])
def test_A_family_matches_law(n):
    for r in range(1, n - 2):
        params = find_parameters("A", n, r, limit=1)
        assert params, (n, r)
        g = family_A(n, r, params[0])
        assert g.structure_constants() == assemble(n, a_as_law(n, r, params[0])).algebra \
            .structure_constants()
        assert is_filiform(g)
        assert verify_derivation(g, torus_derivation(g, "A", r))


def test_B_and_C_torus_derivations():
    for n, r in ((7, 2), (7, 3), (9, 1), (9, 2)):
        params = find_parameters("B", n, r, limit=1)
        assert params, (n, r)
        g = family_B(n, r, params[0])
        assert is_filiform(g) and verify_derivation(g, torus_derivation(g, "B", r))
    g = family_C(7, (1, 1))
    assert verify_derivation(g, torus_derivation(g, "C"))


def test_parameter_counts():
    assert parameter_count("A", 9, 2) == 3
    assert parameter_count("B", 9, 2) == 2
    assert parameter_count("C", 9) == 3
    assert parameter_count("L", 9) == 0
    assert set(FAMILIES) == set("LQRWTPABC")


def test_T_parities_differ():
    assert family_T(6).structure_constants() != family_T(7).structure_constants()


def test_table_sizes():
    assert [len(table(d)) for d in (2, 4, 6)] == [1, 3, 26]
    with pytest.raises(ValueError):
        table(8)


def test_table_dim2():
    (entry,) = table(2)
    assert entry.algebra.is_abelian()
    assert entry.forms[0].instantiate(2) == KForm(2, 2, {(1, 2): 1})


def test_table_dim4_entry1():
    e = table_entry(4, 1)
    assert e.algebra.structure_constants() == {(1, 2): {3: 1}, (1, 3): {4: 1}}
    assert e.forms[0].instantiate(4) == KForm(4, 2, {(1, 4): 1, (2, 3): 1})


def test_table_dim6_entry3():
    e = table_entry(6, 3)
    assert lower_central_series(e.algebra).dims == (6, 4, 3, 2, 1, 0)
    assert e.forms[0].instantiate(6) == KForm(6, 2, {(1, 6): 1, (2, 5): -1, (3, 4): 1})


def test_table_entry24_has_two_labels():
    labels = [f.label for f in table_entry(6, 24).forms]
    assert len(labels) == len(set(labels))


def test_dim6_entry2_sample_is_symplectic():
    e = table_entry(6, 2)
    omega = e.forms[0].instantiate(6, {e.forms[0].params[0].name: 1})
    assert is_symplectic(e.algebra, omega)


def test_affine_parse():
    a = Affine.parse("1-λ1")
    assert a({"λ1": 3}) == -2
    b = Affine.parse("1/2*λ1 + λ2 - 3")
    assert b({"λ1": 4, "λ2": 1}) == 0
    assert b.names == {"λ1", "λ2"}
    assert Affine.parse("−2")({}) == -2


def test_param_spec_and_samples():
    p = ParamSpec("λ", "R", (Fraction(0), Fraction(1)))
    assert not p.allows(0) and not p.allows(1) and p.allows(2)
    assert not ParamSpec("λ", "R+").allows(-1)
    e = table_entry(6, 1)
    form = e.forms[0]
    for sample in form.default_samples():
        assert all(spec.allows(sample[spec.name]) for spec in form.params)
    with pytest.raises(ValueError):
        form.instantiate(6, {form.params[0].name: 0})


def test_fingerprint_examples():
    fp = fingerprint(abelian(4))
    assert fp.dim == 4 and fp.lower == (4, 0) and fp.b1 == 4 and fp.b2 == 6
    assert fingerprint(heisenberg()).b2 == 2
    assert fingerprint(table_entry(6, 3).algebra) != fingerprint(table_entry(6, 26).algebra)


def test_verify_table_low_dimensions_pass():
    rep = verify_table(dims=(2, 4))
    assert rep.ok and rep.failures() == []
    assert len(rep.entries) == 4


def test_verify_table_rejects_out_of_range_sample():
    e = table_entry(6, 1)
    label = e.forms[0].label
    with pytest.raises(ValueError):
        verify_table(dims=6, samples={(6, 1, label): [{e.forms[0].params[0].name: 0}]})


def test_verify_table_reports_obstructions():
    rep = verify_table(dims=6)
    assert all(j and n for _, _, j, n in rep.entries)
    for f in rep.forms:
        if not f.ok:
            assert f.obstruction
    assert rep.undistinguished
