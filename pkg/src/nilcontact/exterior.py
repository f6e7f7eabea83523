"""Exterior algebra of the dual space and the Chevalley-Eilenberg differential.

A :class:`KForm` is a sparse map from strictly increasing 1-based index
tuples ``(i1, ..., ik)`` to rational coefficients, read as
``sum c * alpha_i1 ^ ... ^ alpha_ik`` in the dual basis.  With the
determinant convention the coefficient of ``(i1, ..., ik)`` is exactly the
value of the form on ``(X_i1, ..., X_ik)``.

The differential is fixed on 1-forms by ``d alpha(x, y) = -alpha([x, y])``
and extended as a graded derivation.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import DimensionError
from .exactla import Matrix, as_fraction, determinant, format_rational, kernel, vector

if TYPE_CHECKING:
    from .lie import LieAlgebra, LinearMap


def sort_sign(indices) -> tuple:
    """Sort ``indices`` returning ``(sign, sorted_tuple)``; sign 0 on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


class KForm:
    """Alternating k-form on an n-dimensional Lie algebra, exact and immutable."""

    __slots__ = ("dim", "degree", "_terms", "_hash")

    def __init__(self, dim: int, degree: int, terms: Mapping | None = None):
        if dim < 0 or degree < 0:
            raise DimensionError("dimension and degree must be non-negative")
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DimensionError(f"monomial {idx} does not have degree {degree}")
            if any(not 1 <= i <= dim for i in idx):
                raise DimensionError(f"index out of range in {idx} for dimension {dim}")
            sign, key = sort_sign(idx)
            c = as_fraction(c) * sign
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    @classmethod
    def _raw(cls, dim, degree, terms):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "degree", degree)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls._raw(dim, degree, {})

    @classmethod
    def constant(cls, dim: int, c=1) -> "KForm":
        return cls(dim, 0, {(): c})

    @classmethod
    def basis(cls, dim: int, i: int) -> "KForm":
        """The dual basis 1-form ``alpha_i`` (1-based)."""
        return cls(dim, 1, {(i,): 1})

    @classmethod
    def monomial(cls, dim: int, indices, coeff=1) -> "KForm":
        return cls(dim, len(tuple(indices)), {tuple(indices): coeff})

    @classmethod
    def from_vector(cls, coeffs) -> "KForm":
        """1-form with the given coefficients on ``alpha_1, ..., alpha_n``."""
        coeffs = vector(coeffs)
        return cls(len(coeffs), 1, {(i + 1,): c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, indices) -> Fraction:
        sign, key = sort_sign(indices)
        return sign * self._terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def to_vector(self) -> tuple:
        if self.degree != 1:
            raise DimensionError("only 1-forms have a coefficient vector")
        return tuple(self._terms.get((i,), Fraction(0)) for i in range(1, self.dim + 1))

    def to_matrix(self) -> Matrix:
        """Skew Gram matrix ``W[i][j] = w(X_i, X_j)`` of a 2-form (0-based)."""
        if self.degree != 2:
            raise DimensionError("only 2-forms have a Gram matrix")
        n = self.dim
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in self._terms.items():
            rows[i - 1][j - 1] = c
            rows[j - 1][i - 1] = -c
        return Matrix.from_rows(rows, n)

    def evaluate(self, *vectors) -> Fraction:
        """Value on ``degree`` vectors (determinant convention)."""
        if len(vectors) != self.degree:
            raise DimensionError(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        vs = [vector(v) for v in vectors]
        total = Fraction(0)
        for idx, c in self._terms.items():
            minor = Matrix.from_rows([[v[i - 1] for v in vs] for i in idx], self.degree) \
                if self.degree else None
            total += c * (determinant(minor) if minor is not None else 1)
        return total

    def _check(self, other: "KForm"):
        if not isinstance(other, KForm):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(f"forms on dimensions {self.dim} and {other.dim}")
        return None

    def __add__(self, other: "KForm") -> "KForm":
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.degree != self.degree:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise DimensionError("cannot add forms of different degree")
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, Fraction(0)) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return KForm._raw(self.dim, self.degree, out)

    def __neg__(self) -> "KForm":
        return KForm._raw(self.dim, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, c) -> "KForm":
        if isinstance(c, KForm):
            return NotImplemented
        c = as_fraction(c)
        if not c:
            return KForm.zero(self.dim, self.degree)
        return KForm._raw(self.dim, self.degree, {k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.dim == other.dim and self._terms == other._terms
                and (self.degree == other.degree or not self._terms))

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.dim, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self):
        return f"KForm({self.dim}, {self.degree}, {{{', '.join(f'{k}: {format_rational(v)!r}' for k, v in self.items())}}})"

    def pretty(self, base: int = 1) -> str:
        """Human form in ``alpha_i`` notation; ``base=0`` shifts to X_0 labels."""
        return format_form(self, base)


def format_form(form: KForm, base: int = 1) -> str:
    if form.is_zero():
        return "0"
    parts = []
    for idx, c in form.items():
        mono = "∧".join(f"α{i - 1 + base}" for i in idx) or "1"
        if c == 1 and idx:
            s = mono
        elif c == -1 and idx:
            s = "-" + mono
        else:
            s = f"{format_rational(c)}" + (f"·{mono}" if idx else "")
        parts.append(s)
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; degrees add and the sign comes from sorting."""
    if a.dim != b.dim:
        raise DimensionError(f"forms on dimensions {a.dim} and {b.dim}")
    deg = a.degree + b.degree
    out: dict = {}
    for ia, ca in a._terms.items():
        sa = set(ia)
        for ib, cb in b._terms.items():
            if sa.intersection(ib):
                continue
            sign, key = sort_sign(ia + ib)
            v = out.get(key, Fraction(0)) + sign * ca * cb
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return KForm._raw(a.dim, deg, out)


def wedge_all(forms: Iterable[KForm], dim: int) -> KForm:
    result = KForm.constant(dim)
    for f in forms:
        result = wedge(result, f)
    return result


def power(a: KForm, p: int) -> KForm:
    """``a ^ a ^ ... ^ a`` (p factors); ``power(a, 0)`` is the constant 1."""
    if p < 0:
        raise ValueError("power must be non-negative")
    result = KForm.constant(a.dim)
    for _ in range(p):
        result = wedge(result, a)
        if result.is_zero():
            return KForm.zero(a.dim, a.degree * p)
    return result


def top_coefficient(form: KForm) -> Fraction:
    """Coefficient of ``alpha_1 ^ ... ^ alpha_n`` (zero unless degree n)."""
    if form.degree != form.dim:
        return Fraction(0)
    return form.coefficient(tuple(range(1, form.dim + 1)))


def one_form_differentials(g: "LieAlgebra") -> list:
    """``[d alpha_1, ..., d alpha_n]`` with ``d alpha_k = -sum c_ij^k alpha_i ^ alpha_j``."""
    cached = g._cache.get("d1")
    if cached is not None:
        return cached
    n = g.dim
    terms = [dict() for _ in range(n)]
    for (i, j), coeffs in g.structure_constants().items():
        for k, c in coeffs.items():
            terms[k - 1][(i, j)] = -c
    result = [KForm._raw(n, 2, t) for t in terms]
    g._cache["d1"] = result
    return result


def ce_differential(g: "LieAlgebra", a: KForm) -> KForm:
    """Chevalley-Eilenberg differential with trivial coefficients."""
    if a.dim != g.dim:
        raise DimensionError(f"form on dimension {a.dim} but algebra has dimension {g.dim}")
    d1 = one_form_differentials(g)
    out: dict = {}
    for idx, c in a._terms.items():
        for s, i in enumerate(idx):
            sgn_pos = -1 if s % 2 else 1
            rest = idx[:s] + idx[s + 1:]
            rest_set = set(rest)
            for (p, q), dc in d1[i - 1]._terms.items():
                if p in rest_set or q in rest_set:
                    continue
                sign, key = sort_sign(idx[:s] + (p, q) + idx[s + 1:])
                v = out.get(key, Fraction(0)) + sgn_pos * sign * c * dc
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return KForm._raw(a.dim, a.degree + 1, out)


def pullback(f: "LinearMap", a: KForm) -> KForm:
    """``(f* a)(x1, ..., xk) = a(f x1, ..., f xk)`` for ``f: source -> target``."""
    m = f.matrix
    if a.dim != m.nrows:
        raise DimensionError(f"form on dimension {a.dim} but map targets dimension {m.nrows}")
    n = m.ncols
    ones = [KForm._raw(n, 1, {(i + 1,): c for i, c in enumerate(m.rows[j]) if c})
            for j in range(m.nrows)]
    result = KForm.zero(n, a.degree)
    for idx, c in a._terms.items():
        result = result + wedge_all((ones[i - 1] for i in idx), n) * c
    return result


def monomial_basis(n: int, k: int) -> list:
    return list(combinations(range(1, n + 1), k))


def differential_matrix(g: "LieAlgebra", k: int) -> Matrix:
    """Matrix of ``d: Lambda^k -> Lambda^{k+1}`` in the monomial bases."""
    n = g.dim
    src = monomial_basis(n, k)
    dst = monomial_basis(n, k + 1)
    pos = {m: r for r, m in enumerate(dst)}
    rows = [[Fraction(0)] * len(src) for _ in dst]
    for col, mono in enumerate(src):
        for idx, c in ce_differential(g, KForm._raw(n, k, {mono: Fraction(1)}))._terms.items():
            rows[pos[idx]][col] = c
    return Matrix.from_rows(rows, len(src)) if dst else Matrix.zeros(0, len(src))


def closed_forms(g: "LieAlgebra", k: int) -> list:
    """Basis of the closed k-forms ``Z^k``."""
    mons = monomial_basis(g.dim, k)
    ker = kernel(differential_matrix(g, k))
    return [KForm._raw(g.dim, k, {m: c for m, c in zip(mons, v) if c}) for v in ker.basis]


def betti_number(g: "LieAlgebra", k: int) -> int:
    """``dim H^k(g)`` with trivial coefficients."""
    if k < 0 or k > g.dim:
        return 0
    dk = differential_matrix(g, k)
    z = dk.ncols - dk.rank()
    b = differential_matrix(g, k - 1).rank() if k >= 1 else 0
    return z - b
