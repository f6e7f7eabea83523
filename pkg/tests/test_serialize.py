import json
from fractions import Fraction

import pytest

from nilcontact.catalog import family_W
from nilcontact.errors import FormatError
from nilcontact.exactla import Matrix
from nilcontact.exterior import KForm
from nilcontact.filiform import model_filiform
from nilcontact.lie import LinearMap
from nilcontact.serialize import (algebra_from_json, algebra_to_json, coeffs_from_json,
                                  coeffs_to_json, contact_cert_to_json, dump_json,
                                  form_from_json, form_to_json, load_algebra,
                                  load_algebra_and_form, load_json, map_from_json, map_to_json,
                                  symplectic_cert_to_json)
from nilcontact.structures import is_contact, is_symplectic


def test_algebra_round_trip():
    for g in (model_filiform(5), family_W(7)):
        back = algebra_from_json(json.loads(dump_json(algebra_to_json(g))))
        assert back == g and back.label_base == g.label_base and back.name == g.name


def test_rationals_are_strings():
    obj = algebra_to_json(family_W(7))
    values = [v for b in obj["brackets"] for v in b["coeffs"].values()]
    assert all(isinstance(v, str) for v in values) and "1/10" in values  # [X2, X3] = 1/10 X6


def test_form_round_trip():
    w = KForm(4, 2, {(1, 4): Fraction(-3, 2), (2, 3): 1})
    assert form_from_json(form_to_json(w), 4) == w


def test_map_round_trip(L5):
    f = LinearMap(L5, L5, Matrix.identity(6).scale(Fraction(1, 3)))
    assert map_from_json(map_to_json(f), L5, L5).matrix == f.matrix


def test_coeffs_round_trip():
    n, c = coeffs_from_json(coeffs_to_json(6, {(1, 4): Fraction(1), (2, 6): Fraction(-2, 5)}))
    assert n == 6 and c == {(1, 4): Fraction(1), (2, 6): Fraction(-2, 5)}


def test_certificates(H, n4_1, tmp_path):
    doc = contact_cert_to_json(is_contact(H, KForm.basis(3, 3)))
    assert doc["top_coefficient"] == "-1" and doc["holds"]
    path = tmp_path / "cert.json"
    dump_json(doc, path)
    g, form = load_algebra_and_form(path)
    assert g == H and form == KForm.basis(3, 3)
    sdoc = symplectic_cert_to_json(is_symplectic(n4_1, KForm(4, 2, {(1, 4): 1, (2, 3): 1})))
    assert sdoc["top_coefficient"] == "2" and sdoc["closed"]


def test_invalid_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"dimension": 3,\n "brackets": [}')
    with pytest.raises(FormatError) as info:
        load_json(p)
    assert "line 2" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        load_json(tmp_path / "missing.json")


@pytest.mark.parametrize("obj, fragment", [
    ({"brackets": []}, "dimension"),
    ({"dimension": 3, "brackets": [{"i": 2, "j": 1, "coeffs": {"3": "1"}}]}, "i < j"),
    ({"dimension": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"4": "1"}}]}, "out of range"),
    ({"dimension": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "0.5"}}]}, "brackets[0]"),
    ({"dimension": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1.5}}]}, "rational"),
    ({"dimension": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}},
                                   {"i": 1, "j": 2, "coeffs": {"3": "1"}}]}, "duplicate"),
    ({"dimension": 3, "label_base": 2, "brackets": []}, "label_base"),
])
def test_algebra_format_errors(obj, fragment):
    with pytest.raises(FormatError) as info:
        algebra_from_json(obj)
    assert fragment in str(info.value)


def test_algebra_jacobi_failure_is_format_error():
    obj = {"dimension": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "1"}},
                                        {"i": 1, "j": 3, "coeffs": {"2": "1"}}]}
    with pytest.raises(FormatError):
        algebra_from_json(obj)


@pytest.mark.parametrize("obj", [
    {"degree": 2, "terms": [{"indices": [2, 1], "coeff": "1"}]},
    {"degree": 2, "terms": [{"indices": [1], "coeff": "1"}]},
    {"degree": 1, "terms": [{"indices": [5], "coeff": "1"}]},
    {"degree": 1, "terms": [{"indices": [1], "coeff": "1"}, {"indices": [1], "coeff": "2"}]},
    {"terms": []},
])
def test_form_format_errors(obj):
    with pytest.raises(FormatError):
        form_from_json(obj, 4)


def test_load_algebra_and_form_requires_both(tmp_path, H):
    p = tmp_path / "alg.json"
    dump_json(algebra_to_json(H), p)
    assert load_algebra(p) == H
    with pytest.raises(FormatError):
        load_algebra_and_form(p)
