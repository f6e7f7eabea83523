"""JSON file formats for algebras, forms, maps, coefficient maps and certificates.

Rationals are always strings (``"p"`` or ``"p/q"``).  Parse errors raise
:class:`FormatError` with a dotted path to the offending field.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import FormatError, JacobiError
from .exactla import Matrix, format_rational, parse_rational
from .exterior import KForm
from .lie import LieAlgebra, LinearMap


def load_json(path) -> object:
    """Read a JSON file, turning syntax errors into ``FormatError`` with line/column."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file ({exc.strerror})", str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}",
                          str(path)) from exc


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, ensure_ascii=False, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _rational(value, where) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str):
        raise FormatError("expected a rational string like \"p/q\"", where)
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise FormatError(str(exc), where) from exc


def _int(obj, key, where, minimum=None) -> int:
    if key not in obj:
        raise FormatError(f"missing field {key!r}", where)
    v = obj[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise FormatError("expected an integer", f"{where}.{key}")
    if minimum is not None and v < minimum:
        raise FormatError(f"must be >= {minimum}", f"{where}.{key}")
    return v


def _list(obj, key, where) -> list:
    v = obj.get(key, [])
    if not isinstance(v, list):
        raise FormatError("expected a list", f"{where}.{key}")
    return v


def _object(obj, where) -> dict:
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object", where)
    return obj


# algebras

def algebra_to_json(g: LieAlgebra) -> dict:
    out = {}
    if g.name:
        out["name"] = g.name
    out["dimension"] = g.dim
    if g.label_base != 1:
        out["label_base"] = g.label_base
    out["brackets"] = [
        {"i": i, "j": j, "coeffs": {str(k): format_rational(c) for k, c in coeffs.items()}}
        for (i, j), coeffs in g.structure_constants().items()]
    return out


def algebra_from_json(obj, where: str = "algebra", check: bool = True) -> LieAlgebra:
    obj = _object(obj, where)
    n = _int(obj, "dimension", where, minimum=1)
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise FormatError("expected a string", f"{where}.name")
    base = obj.get("label_base", 1)
    if base not in (0, 1):
        raise FormatError("must be 0 or 1", f"{where}.label_base")
    brackets = {}
    for t, entry in enumerate(_list(obj, "brackets", where)):
        w = f"{where}.brackets[{t}]"
        entry = _object(entry, w)
        i = _int(entry, "i", w, minimum=1)
        j = _int(entry, "j", w, minimum=1)
        if i >= j:
            raise FormatError("bracket entries need i < j", w)
        if j > n:
            raise FormatError(f"index {j} exceeds dimension {n}", w)
        if (i, j) in brackets:
            raise FormatError(f"duplicate bracket ({i}, {j})", w)
        coeffs = _object(entry.get("coeffs", {}), f"{w}.coeffs")
        vals = {}
        for k, c in coeffs.items():
            try:
                kk = int(k)
            except ValueError:
                raise FormatError(f"key {k!r} is not an index", f"{w}.coeffs") from None
            if not 1 <= kk <= n:
                raise FormatError(f"index {kk} out of range 1..{n}", f"{w}.coeffs")
            vals[kk] = _rational(c, f"{w}.coeffs.{k}")
        brackets[(i, j)] = vals
    try:
        return LieAlgebra(n, brackets, name=name, label_base=base, check=check)
    except JacobiError as exc:
        raise FormatError(str(exc), where) from exc


def load_algebra(path) -> LieAlgebra:
    return algebra_from_json(load_json(path), where=str(path))


# forms

def form_to_json(a: KForm) -> dict:
    return {"degree": a.degree,
            "terms": [{"indices": list(idx), "coeff": format_rational(c)} for idx, c in a.items()]}


def form_from_json(obj, dim: int, where: str = "form") -> KForm:
    obj = _object(obj, where)
    k = _int(obj, "degree", where, minimum=0)
    terms = {}
    for t, term in enumerate(_list(obj, "terms", where)):
        w = f"{where}.terms[{t}]"
        term = _object(term, w)
        idx = term.get("indices")
        if not isinstance(idx, list) or not all(isinstance(i, int) for i in idx):
            raise FormatError("indices must be a list of integers", w)
        if len(idx) != k:
            raise FormatError(f"expected {k} indices", w)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise FormatError("indices must be strictly increasing", w)
        if any(not 1 <= i <= dim for i in idx):
            raise FormatError(f"index out of range 1..{dim}", w)
        if tuple(idx) in terms:
            raise FormatError(f"duplicate monomial {idx}", w)
        terms[tuple(idx)] = _rational(term.get("coeff"), f"{w}.coeff")
    return KForm(dim, k, terms)


def load_form(path, dim: int) -> KForm:
    return form_from_json(load_json(path), dim, where=str(path))


# linear maps

def map_to_json(f: LinearMap) -> dict:
    return {"matrix": f.matrix.to_strings()}


def map_from_json(obj, source: LieAlgebra, target: LieAlgebra, where: str = "map") -> LinearMap:
    obj = _object(obj, where)
    rows = obj.get("matrix")
    if not isinstance(rows, list) or len(rows) != target.dim:
        raise FormatError(f"matrix must have {target.dim} rows", f"{where}.matrix")
    parsed = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != source.dim:
            raise FormatError(f"row must have {source.dim} entries", f"{where}.matrix[{r}]")
        parsed.append([_rational(x, f"{where}.matrix[{r}][{c}]") for c, x in enumerate(row)])
    return LinearMap(source, target, Matrix.from_rows(parsed, source.dim))


# filiform coefficient maps

def coeffs_to_json(n: int, coeffs: dict) -> dict:
    return {"n": n, "coeffs": [{"k": k, "r": r, "value": format_rational(v)}
                               for (k, r), v in sorted(coeffs.items())]}


def coeffs_from_json(obj, where: str = "coefficients") -> tuple:
    obj = _object(obj, where)
    n = _int(obj, "n", where, minimum=1)
    out = {}
    for t, item in enumerate(_list(obj, "coeffs", where)):
        w = f"{where}.coeffs[{t}]"
        item = _object(item, w)
        key = (_int(item, "k", w), _int(item, "r", w))
        if key in out:
            raise FormatError(f"duplicate pair {key}", w)
        out[key] = _rational(item.get("value"), f"{w}.value")
    return n, out


# certificates

def contact_cert_to_json(cert) -> dict:
    return {"kind": "contact", "holds": cert.holds,
            "algebra": algebra_to_json(cert.algebra), "form": form_to_json(cert.alpha),
            "top_coefficient": format_rational(cert.top_coefficient)}


def symplectic_cert_to_json(cert) -> dict:
    return {"kind": "symplectic", "holds": cert.holds, "closed": cert.closed,
            "algebra": algebra_to_json(cert.algebra), "form": form_to_json(cert.omega),
            "d_omega": form_to_json(cert.d_omega),
            "top_coefficient": format_rational(cert.top_coefficient)}


def load_algebra_and_form(path) -> tuple:
    """Accept a certificate document (algebra + form) in place of separate files."""
    obj = _object(load_json(path), str(path))
    if "algebra" not in obj or "form" not in obj:
        raise FormatError("expected a document with 'algebra' and 'form'", str(path))
    g = algebra_from_json(obj["algebra"], f"{path}.algebra")
    return g, form_from_json(obj["form"], g.dim, f"{path}.form")

