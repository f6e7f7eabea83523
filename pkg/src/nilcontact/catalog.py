"""Named filiform families and the low-dimensional symplectic classification table.

Families are built on ``X_0 .. X_n`` (``Y_0 .. Y_n`` for the rank-one
families), so the algebra has dimension ``n + 1``.  The classification table
ships as ``data/symplectic_table.json``; everything read from it is checked
by :func:`verify_table` rather than trusted.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from math import factorial
from typing import NamedTuple

from .errors import DimensionError, JacobiError
from .exactla import Matrix, as_fraction, parse_rational, unit_vector
from .exterior import KForm, betti_number, ce_differential, power, top_coefficient
from .filiform import assemble, binom, filiform_algebra, model_filiform, mu0_brackets
from .lie import (LieAlgebra, LinearMap, center, derived_series, is_nilpotent,
                  lower_central_series, upper_central_series, verify_jacobi)
from .serialize import algebra_from_json

FAMILIES = ("L", "Q", "R", "W", "T", "P", "A", "B", "C")


def _add(table, i, j, k, c):
    if i == j or not c:
        return
    if i > j:
        i, j, c = j, i, -c
    slot = table.setdefault((i, j), {})
    slot[k] = slot.get(k, 0) + as_fraction(c)


def family_L(n: int) -> LieAlgebra:
    return model_filiform(n)


def family_Q(n: int, basis: str = "X") -> LieAlgebra:
    """``Q_n`` (n odd); ``basis="Z"`` gives the presentation with ``[Z_0, Z_{n-1}] = 0``."""
    if n % 2 == 0 or n < 3:
        raise DimensionError("Q_n needs odd n >= 3")
    k = n // 2
    top = n - 1 if basis == "Z" else n
    br = {(0, i): {i + 1: 1} for i in range(1, top)}
    for i in range(1, k + 1):
        _add(br, i, n - i, n, (-1) ** i)
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    return filiform_algebra(n, br, name=f"Q_{n}" if basis == "X" else f"Q_{n}(Z)")


def q_basis_change(n: int) -> LinearMap:
    """``Q_n(Z) -> Q_n``: ``Z_0 -> X_0 + X_1``, ``Z_i -> X_i``."""
    qz, qx = family_Q(n, "Z"), family_Q(n, "X")
    cols = [unit_vector(n + 1, i) for i in range(n + 1)]
    cols[0] = tuple(Fraction(1) if t in (0, 1) else Fraction(0) for t in range(n + 1))
    return LinearMap(qz, qx, Matrix.from_columns(cols, n + 1))


def family_R(n: int) -> LieAlgebra:
    if n < 3:
        raise DimensionError("R_n needs n >= 3")
    br = mu0_brackets(n)
    for j in range(2, n - 1):
        _add(br, 1, j, j + 2, 1)
    return filiform_algebra(n, br, name=f"R_{n}")


def family_W(n: int, basis: str = "X") -> LieAlgebra:
    """``W_n``; ``basis="Y"`` gives ``[Y_i, Y_j] = (j - i) Y_{i+j}`` on ``Y_1 .. Y_{n+1}``."""
    if n < 3:
        raise DimensionError("W_n needs n >= 3")
    if basis == "Y":
        br = {}
        for i in range(1, n + 2):
            for j in range(i + 1, n + 2):
                if i + j <= n + 1:
                    br[(i, j)] = {i + j: j - i}
        return LieAlgebra(n + 1, br, name=f"W_{n}(Y)")
    if basis != "X":
        raise ValueError("basis must be 'X' or 'Y'")
    br = mu0_brackets(n)
    for i in range(1, n - 1):
        for j in range(i + 1, n - 1):
            if i + j + 1 <= n:
                c = Fraction(6 * factorial(i - 1) * factorial(j - 1) * (j - i), factorial(i + j))
                _add(br, i, j, i + j + 1, c)
    return filiform_algebra(n, br, name=f"W_{n}")


def w_basis_change(n: int) -> LinearMap:
    """``W_n -> W_n(Y)``: ``X_0 -> Y_1``, ``X_i -> 6 (i-1)! Y_{i+1}``."""
    wx, wy = family_W(n, "X"), family_W(n, "Y")
    diag = [1] + [6 * factorial(i - 1) for i in range(1, n + 1)]
    rows = [[diag[a] if a == b else 0 for b in range(n + 1)] for a in range(n + 1)]
    return LinearMap(wx, wy, Matrix.from_rows(rows, n + 1))


def family_T(n: int) -> LieAlgebra:
    """``T_n``; the odd and even cases have different laws."""
    if n < 4:
        raise DimensionError("T_n needs n >= 4")
    k = n // 2
    br = mu0_brackets(n)
    if n % 2 == 0:
        for i in range(k - 1):
            _add(br, k - i - 1, k + i, n, (-1) ** i)
    else:
        for i in range(k - 1):
            for j in (0, 1):
                _add(br, k - i - 1, k + i + j, n + j - 1, (-1) ** i * binom(i + j, i))
    return filiform_algebra(n, br, name=f"T_{n}")


def family_P(n: int) -> LieAlgebra:
    if n % 2 or n < 6:
        raise DimensionError("P_n needs even n >= 6")
    k = n // 2
    s = Fraction(2, (k - 1) * (k - 2))
    br = mu0_brackets(n)
    _add(br, k - 1, k, n, 1)
    for i in range(1, k - 1):
        _add(br, k - i - 1, k + i, n, (-1) ** i * (1 - s * binom(i + 1, i - 1)))
    for i in range(k - 2):
        for j in (0, 1):
            _add(br, k - i - 2, k + i + j - 1, n + j - 2, (-1) ** i * s * binom(i + j, i))
    return filiform_algebra(n, br, name=f"P_{n}")


def _rank_one_coeff(params, i, j):
    return sum((as_fraction(params[k - 1]) * (-1) ** (k - i) * binom(j - k - 1, k - i)
                for k in range(i, len(params) + 1)), Fraction(0))


def _check_params(params, t, family):
    if len(params) != t:
        raise ValueError(f"family {family} needs {t} parameters, got {len(params)}")
    if not any(as_fraction(a) for a in params):
        raise ValueError("at least one parameter must be nonzero")


def family_A(n: int, r: int, params) -> LieAlgebra:
    if not 1 <= r <= n - 3:
        raise DimensionError("A^r needs 1 <= r <= n - 3")
    t = (n - r - 1) // 2
    _check_params(params, t, "A")
    br = mu0_brackets(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if i + j + r <= n:
                _add(br, i, j, i + j + r, _rank_one_coeff(params, i, j))
    return filiform_algebra(n, br, name=f"A_{n + 1}^{r}")


def family_B(n: int, r: int, params) -> LieAlgebra:
    if n % 2 == 0:
        raise DimensionError("B^r needs odd n")
    if not 1 <= r <= n - 4:
        raise DimensionError("B^r needs 1 <= r <= n - 4")
    m = n // 2
    t = (n - r - 2) // 2
    _check_params(params, t, "B")
    br = {(0, i): {i + 1: 1} for i in range(1, n - 1)}
    for i in range(1, m + 1):
        _add(br, i, n - i, n, (-1) ** i)
    for i in range(1, n):
        for j in range(i + 1, n):
            if i + j + r <= n - 1:
                _add(br, i, j, i + j + r, _rank_one_coeff(params, i, j))
    return filiform_algebra(n, br, name=f"B_{n + 1}^{r}")


def family_C(n: int, params) -> LieAlgebra:
    if n % 2 == 0 or n < 5:
        raise DimensionError("C needs odd n >= 5")
    m = n // 2
    if len(params) != m - 1:
        raise ValueError(f"family C needs {m - 1} parameters, got {len(params)}")
    br = {(0, i): {i + 1: 1} for i in range(1, n - 1)}
    for i in range(1, m + 1):
        _add(br, i, n - i, n, (-1) ** i)
    for k in range(1, m):
        for i in range(1, n - 2 * k):
            j = n - i - 2 * k
            if i < j:
                _add(br, i, j, n, (-1) ** i * as_fraction(params[k - 1]))
    return filiform_algebra(n, br, name=f"C_{n + 1}")


def torus_derivation(g: LieAlgebra, family: str, r: int | None = None) -> LinearMap:
    """The diagonal derivation spanning the maximal torus of a rank-one family."""
    n = g.dim - 1
    if family == "A":
        diag = [1] + [i + r for i in range(1, n + 1)]
    elif family == "B":
        diag = [1] + [i + r for i in range(1, n)] + [n + 2 * r]
    elif family == "C":
        diag = [0] + [1] * (n - 1) + [2]
    else:
        raise ValueError("torus derivations are listed for families A, B, C")
    return LinearMap(g, g, Matrix.from_rows(
        [[diag[a] if a == b else 0 for b in range(n + 1)] for a in range(n + 1)], n + 1))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int
    r: int | None = None
    params: tuple = ()


def build(spec: FamilySpec) -> LieAlgebra:
    f = spec.family.upper()
    if f not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; expected one of {', '.join(FAMILIES)}")
    if f in ("A", "B") and spec.r is None:
        raise ValueError(f"family {f} needs r")
    simple = {"L": family_L, "Q": family_Q, "R": family_R, "W": family_W, "T": family_T,
              "P": family_P}
    if f in simple:
        return simple[f](spec.n)
    if f == "A":
        return family_A(spec.n, spec.r, spec.params)
    if f == "B":
        return family_B(spec.n, spec.r, spec.params)
    return family_C(spec.n, spec.params)


def parameter_count(family: str, n: int, r: int | None = None) -> int:
    if family == "A":
        return (n - r - 1) // 2
    if family == "B":
        return (n - r - 2) // 2
    if family == "C":
        return n // 2 - 1
    return 0


def find_parameters(family: str, n: int, r: int | None = None, values=(-1, 0, 1),
                    limit: int | None = None) -> list:
    """Parameter vectors over ``values`` for which the family satisfies Jacobi.

    The polynomial constraints on the parameters are not written out anywhere,
    so valid samples are found by enumeration.
    """
    t = parameter_count(family, n, r)
    found = []
    for params in product(values, repeat=t):
        if not any(params):
            continue
        try:
            build(FamilySpec(family, n, r, tuple(Fraction(p) for p in params)))
        except JacobiError:
            continue
        found.append(tuple(Fraction(p) for p in params))
        if limit and len(found) >= limit:
            break
    return found


def a_as_law(n: int, r: int, params) -> dict:
    """``A^r(params)`` as a coefficient map over the cocycles ``Psi_{k, 2k+1+r}``."""
    return {(k, 2 * k + 1 + r): as_fraction(a) for k, a in enumerate(params, 1) if as_fraction(a)}


# classification table

_TERM_RE = re.compile(r"[+\-]?[^+\-]+")


@dataclass(frozen=True)
class Affine:
    """``const + sum coeffs[name] * name`` over the table parameters."""

    const: Fraction
    coeffs: tuple  # ((name, Fraction), ...)

    @classmethod
    def parse(cls, text: str) -> "Affine":
        s = text.replace(" ", "").replace("−", "-")
        if not s:
            raise ValueError("empty coefficient")
        const = Fraction(0)
        coeffs = {}
        for term in _TERM_RE.findall(s):
            sign = -1 if term[0] == "-" else 1
            body = term.lstrip("+-")
            if "λ" in body:
                pre, _, name = body.rpartition("λ")
                name = "λ" + name
                pre = pre.rstrip("*")
                c = parse_rational(pre) if pre else Fraction(1)
                coeffs[name] = coeffs.get(name, Fraction(0)) + sign * c
            else:
                const += sign * parse_rational(body)
        return cls(const, tuple(sorted(coeffs.items())))

    def __call__(self, values: dict) -> Fraction:
        return self.const + sum((c * as_fraction(values[name]) for name, c in self.coeffs),
                                Fraction(0))

    @property
    def names(self) -> set:
        return {name for name, _ in self.coeffs}


@dataclass(frozen=True)
class ParamSpec:
    name: str
    domain: str = "R"  # "R" or "R+"
    exclude: tuple = ()

    def allows(self, value) -> bool:
        value = as_fraction(value)
        if self.domain == "R+" and value <= 0:
            return False
        return value not in self.exclude


@dataclass(frozen=True)
class FormTemplate:
    label: str
    terms: tuple  # ((i, j), Affine)
    params: tuple  # ParamSpec
    constraints: str = ""
    note: str | None = None

    def instantiate(self, dim: int, values: dict | None = None) -> KForm:
        values = values or {}
        for p in self.params:
            if p.name not in values:
                raise ValueError(f"missing value for {p.name}")
            if not p.allows(values[p.name]):
                raise ValueError(f"{p.name} = {values[p.name]} violates '{self.constraints}'")
        return KForm(dim, 2, {idx: a(values) for idx, a in self.terms})

    def default_samples(self) -> list:
        if not self.params:
            return [{}]
        if len(self.params) == 1:
            (p,) = self.params
            return [{p.name: Fraction(v)} for v in (1, 2, -1) if p.allows(v)]
        if len(self.params) == 2:
            p, q = self.params
            return [{p.name: Fraction(a), q.name: Fraction(b)}
                    for a, b in ((0, 1), (1, 1), (2, -1)) if p.allows(a) and q.allows(b)]
        raise ValueError("templates have at most two parameters")


@dataclass(frozen=True)
class TableEntry:
    dim: int
    index: int
    algebra: LieAlgebra
    forms: tuple
    note: str | None = None


def _table_data() -> list:
    text = resources.files("nilcontact").joinpath("data/symplectic_table.json").read_text(
        encoding="utf-8")
    return json.loads(text)


def _parse_entry(obj, check: bool = True) -> TableEntry:
    where = f"table[dim {obj['dim']}, #{obj['index']}]"
    g = algebra_from_json(obj["algebra"], f"{where}.algebra", check=check)
    forms = []
    for f in obj["forms"]:
        terms = tuple((tuple(t["indices"]), Affine.parse(t["coeff"]))
                      for t in f["template"]["terms"])
        params = tuple(ParamSpec(p["name"], p.get("domain", "R"),
                                 tuple(parse_rational(x) for x in p.get("exclude", ())))
                       for p in f.get("params", ()))
        used = set().union(*(a.names for _, a in terms)) if terms else set()
        if used - {p.name for p in params}:
            raise ValueError(f"{where}: template uses undeclared parameters {used}")
        forms.append(FormTemplate(f["label"], terms, params, f.get("constraints", ""),
                                  f.get("note")))
    return TableEntry(obj["dim"], obj["index"], g, tuple(forms), obj.get("note"))


def table(dim: int, check: bool = True) -> list:
    """Entries of the classification table in dimension 2, 4 or 6."""
    if dim not in (2, 4, 6):
        raise ValueError("the table covers dimensions 2, 4 and 6 only")
    return [_parse_entry(obj, check) for obj in _table_data() if obj["dim"] == dim]


def table_entry(dim: int, index: int) -> TableEntry:
    for e in table(dim):
        if e.index == index:
            return e
    raise KeyError(f"no entry {index} in dimension {dim}")


class Fingerprint(NamedTuple):
    dim: int
    lower: tuple
    upper: tuple
    derived: tuple
    center: int
    b1: int
    b2: int


def fingerprint(g: LieAlgebra) -> Fingerprint:
    """Isomorphism invariants; equal fingerprints do not imply isomorphism."""
    return Fingerprint(g.dim, lower_central_series(g).dims,
                       tuple(s.dim for s in upper_central_series(g)),
                       tuple(s.dim for s in derived_series(g)),
                       center(g).dim, betti_number(g, 1), betti_number(g, 2))


@dataclass(frozen=True)
class FormCheck:
    dim: int
    index: int
    label: str
    sample: dict
    closed: bool
    nondegenerate: bool
    obstruction: str | None = None

    @property
    def ok(self) -> bool:
        return self.closed and self.nondegenerate


@dataclass
class TableReport:
    entries: list = field(default_factory=list)  # (dim, index, jacobi, nilpotent)
    forms: list = field(default_factory=list)  # FormCheck
    undistinguished: list = field(default_factory=list)  # groups of (dim, index)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(j and n for _, _, j, n in self.entries) and all(f.ok for f in self.forms)

    def failures(self) -> list:
        bad = [f"dim {d} entry {i}: {'Jacobi fails' if not j else 'not nilpotent'}"
               for d, i, j, n in self.entries if not (j and n)]
        bad += [f"dim {f.dim} entry {f.index} {f.label} {f.sample}: {f.obstruction}"
                for f in self.forms if not f.ok]
        return bad


def _sample_str(sample: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in sample.items())


def verify_table(dims=(2, 4, 6), samples: dict | None = None) -> TableReport:
    """Check every entry and every form at the given (or default) parameter samples.

    ``samples`` may map ``(dim, index, label)`` to a list of parameter dicts;
    each is validated against the template constraints.
    """
    if isinstance(dims, int):
        dims = (dims,)
    report = TableReport()
    for dim in dims:
        entries = table(dim, check=False)
        prints = {}
        for e in entries:
            g = e.algebra
            jac = not verify_jacobi(g)
            nil = jac and is_nilpotent(g)
            report.entries.append((dim, e.index, jac, nil))
            if e.note:
                report.notes.append(f"dim {dim} entry {e.index}: {e.note}")
            if jac:
                prints.setdefault(fingerprint(g), []).append((dim, e.index))
            for f in e.forms:
                if f.note:
                    report.notes.append(f"dim {dim} entry {e.index} {f.label}: {f.note}")
                chosen = (samples or {}).get((dim, e.index, f.label), f.default_samples())
                for s in chosen:
                    w = f.instantiate(g.dim, s)
                    if not jac:
                        report.forms.append(FormCheck(dim, e.index, f.label, s, False, False,
                                                      "algebra fails Jacobi"))
                        continue
                    dw = ce_differential(g, w)
                    top = top_coefficient(power(w, g.dim // 2))
                    obstruction = None
                    if dw:
                        obstruction = f"dω = {dw.pretty()}"
                    elif not top:
                        obstruction = "ω^p = 0 (degenerate)"
                    report.forms.append(FormCheck(dim, e.index, f.label, s, not dw,
                                                  bool(top), obstruction))
        report.undistinguished += [grp for grp in prints.values() if len(grp) > 1]
    return report
