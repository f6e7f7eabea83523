"""Filiform algebras in adapted bases.

Laws are written on ``X_0, ..., X_n`` (stored at indices ``1 .. n+1``) as
``mu_0 + sum a_{k,r} Psi_{k,r}`` where ``mu_0`` is the law of ``L_n``:
``[X_0, X_i] = X_{i+1}``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .errors import (DeltaError, DimensionError, JacobiError, NormalFormError,
                     NotAdaptedError, NotContactError)
from .exactla import Matrix, add_scaled, as_fraction, nilpotent_exp, unit_vector, vector
from .exterior import KForm, pullback
from .lie import LieAlgebra, LinearMap, bracket, change_basis, verify_jacobi, verify_morphism

log = logging.getLogger(__name__)


def binom(q: int, s: int) -> int:
    """``C_q^s`` with ``C_q^s = 0`` whenever ``q < 0`` or ``q < s``."""
    if q < 0 or s < 0 or q < s:
        return 0
    return comb(q, s)


def filiform_algebra(n: int, brackets: Mapping, name: str | None = None,
                     check: bool = True) -> LieAlgebra:
    """Build an ``(n+1)``-dimensional algebra from brackets on ``X_0 .. X_n`` labels."""
    shifted = {}
    for (i, j), val in brackets.items():
        shifted[(i + 1, j + 1)] = {k + 1: c for k, c in val.items()}
    return LieAlgebra(n + 1, shifted, name=name, label_base=0, check=check)


def mu0_brackets(n: int) -> dict:
    return {(0, i): {i + 1: 1} for i in range(1, n)}


def model_filiform(n: int) -> LieAlgebra:
    """``L_n``."""
    if n < 2:
        raise DimensionError("L_n needs n >= 2")
    return filiform_algebra(n, mu0_brackets(n), name=f"L_{n}")


@dataclass(frozen=True)
class DeltaSet:
    n: int
    pairs: tuple

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs


def delta_set(n: int) -> DeltaSet:
    """Admissible ``(k, r)``: ``1 <= k <= n-1``, ``2k+1 < r <= n``, ``r >= 4``,
    plus ``((n-1)/2, n)`` when ``n`` is odd."""
    if n < 3:
        raise DeltaError("the index set is defined for n >= 3")
    pairs = {(k, r) for k in range(1, n) for r in range(max(2 * k + 2, 4), n + 1)}
    if n % 2:
        pairs.add(((n - 1) // 2, n))
    return DeltaSet(n, tuple(sorted(pairs)))


class GValuedCochain2:
    """Skew bilinear map ``g x g -> g`` given on basis pairs ``i < j`` (1-based)."""

    __slots__ = ("dim", "_table")

    def __init__(self, dim: int, values: Mapping | None = None):
        self.dim = dim
        table = {}
        for (i, j), v in (values or {}).items():
            v = vector(v) if not isinstance(v, Mapping) else tuple(
                as_fraction(v.get(k, 0)) for k in range(1, dim + 1))
            if len(v) != dim:
                raise DimensionError("cochain value has wrong length")
            if i == j:
                continue
            if i > j:
                i, j, v = j, i, tuple(-x for x in v)
            acc = list(table.get((i, j), (Fraction(0),) * dim))
            add_scaled(acc, v, 1)
            if any(acc):
                table[(i, j)] = tuple(acc)
            else:
                table.pop((i, j), None)
        self._table = table

    @property
    def values(self) -> dict:
        return dict(self._table)

    def basis_value(self, i: int, j: int) -> tuple:
        """``Psi(X_i, X_j)`` for 1-based storage indices."""
        if i == j:
            return (Fraction(0),) * self.dim
        if i < j:
            return self._table.get((i, j), (Fraction(0),) * self.dim)
        return tuple(-x for x in self._table.get((j, i), (Fraction(0),) * self.dim))

    def __call__(self, x, y) -> tuple:
        out = [Fraction(0)] * self.dim
        for (i, j), v in self._table.items():
            c = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
            add_scaled(out, v, c)
        return tuple(out)

    def __add__(self, other: "GValuedCochain2") -> "GValuedCochain2":
        vals = dict(self._table)
        for key, v in other._table.items():
            cur = vals.get(key)
            vals[key] = v if cur is None else tuple(a + b for a, b in zip(cur, v))
        return GValuedCochain2(self.dim, vals)

    def scale(self, c) -> "GValuedCochain2":
        c = as_fraction(c)
        return GValuedCochain2(self.dim, {k: tuple(c * x for x in v) for k, v in self._table.items()})

    def is_zero(self) -> bool:
        return not self._table

    def __eq__(self, other):
        return isinstance(other, GValuedCochain2) and self.dim == other.dim and self._table == other._table


def psi(k: int, r: int, n: int) -> GValuedCochain2:
    """The cocycle ``Psi_{k,r}`` of ``L_n``:
    ``Psi(X_i, X_j) = (-1)^(k-i) C_{j-k-1}^{k-i} X_{i+j+r-2k-1}`` for
    ``1 <= i <= k < j <= n`` and target index ``<= n``."""
    if (k, r) not in delta_set(n):
        raise DeltaError(f"({k}, {r}) is not an admissible pair for n = {n}")
    values = {}
    for i in range(1, k + 1):
        for j in range(k + 1, n + 1):
            t = i + j + r - 2 * k - 1
            c = (-1) ** (k - i) * binom(j - k - 1, k - i)
            if t <= n and c:
                values[(i + 1, j + 1)] = {t + 1: c}
    return GValuedCochain2(n + 1, values)


def _is_model(g: LieAlgebra) -> bool:
    return g.dim >= 3 and g == model_filiform(g.dim - 1)


def cocycle_defect(g: LieAlgebra, c: GValuedCochain2) -> list:
    """Basis triples where ``sum_cyc ([x, c(y,z)] - c([x,y], z))`` is nonzero."""
    n = g.dim
    bad = []
    e = [unit_vector(n, a) for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            for d in range(b + 1, n):
                r = [Fraction(0)] * n
                for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
                    add_scaled(r, bracket(g, e[x], c.basis_value(y + 1, z + 1)), 1)
                    add_scaled(r, c(g.basis_bracket(x, y), e[z]), -1)
                if any(r):
                    bad.append(((a + 1, b + 1, d + 1), tuple(r)))
    return bad


def cocycle_check(g: LieAlgebra, c: GValuedCochain2) -> bool:
    """Adjoint-coefficient 2-cocycle condition on ``L_n``."""
    if not _is_model(g):
        raise ValueError("cocycle_check expects the model filiform algebra L_n")
    if c.dim != g.dim:
        raise DimensionError("cochain and algebra dimensions differ")
    return not cocycle_defect(g, c)


def psi_circ_psi(c: GValuedCochain2) -> list:
    """Nonzero values of ``c(c(x,y),z) + c(c(y,z),x) + c(c(z,x),y)`` on basis triples."""
    n = c.dim
    e = [unit_vector(n, a) for a in range(n)]
    bad = []
    for a in range(n):
        for b in range(a + 1, n):
            for d in range(b + 1, n):
                r = [Fraction(0)] * n
                for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
                    add_scaled(r, c(c.basis_value(x + 1, y + 1), e[z]), 1)
                if any(r):
                    bad.append(((a + 1, b + 1, d + 1), tuple(r)))
    return bad


@dataclass(frozen=True)
class FiliformLaw:
    n: int
    coeffs: tuple  # sorted ((k, r), value) with value != 0
    algebra: LieAlgebra = field(compare=False)

    def a(self, k: int, r: int) -> Fraction:
        return dict(self.coeffs).get((k, r), Fraction(0))

    @property
    def coefficient_map(self) -> dict:
        return dict(self.coeffs)

    @property
    def cochain(self) -> GValuedCochain2:
        return combine_psi(self.n, self.coefficient_map)


def combine_psi(n: int, coeffs: Mapping) -> GValuedCochain2:
    total = GValuedCochain2(n + 1)
    for (k, r), a in coeffs.items():
        if a:
            total = total + psi(k, r, n).scale(a)
    return total


def _law_brackets(n: int, coeffs: Mapping) -> dict:
    brackets = {(i + 1, j + 1): {t + 1: c for t, c in v.items()}
                for (i, j), v in mu0_brackets(n).items()}
    for (i, j), v in combine_psi(n, coeffs).values.items():
        cur = brackets.setdefault((i, j), {})
        for t, c in enumerate(v):
            if c:
                cur[t + 1] = cur.get(t + 1, Fraction(0)) + c
    return brackets


def assemble(n: int, coeffs: Mapping | None = None, name: str | None = None,
             check: bool = True) -> FiliformLaw:
    """``mu_0 + sum a_{k,r} Psi_{k,r}``; Jacobi is verified unless ``check=False``."""
    coeffs = {tuple(k): as_fraction(v) for k, v in (coeffs or {}).items()}
    delta = delta_set(n)
    for key in coeffs:
        if key not in delta:
            raise DeltaError(f"{key} is not in the index set for n = {n}")
    coeffs = {k: v for k, v in coeffs.items() if v}
    g = LieAlgebra(n + 1, _law_brackets(n, coeffs), name=name, label_base=0, check=False)
    if check:
        bad = verify_jacobi(g)
        if bad:
            v = bad[0]
            raise JacobiError(
                f"law is not Lie: Jacobi fails on (X{v.i - 1}, X{v.j - 1}, X{v.k - 1}) with residual "
                f"{[str(x) for x in v.residual]}", bad)
    return FiliformLaw(n, tuple(sorted(coeffs.items())), g)


def extract(g: LieAlgebra, basis=None) -> dict:
    """Read ``a_{k,r}`` as the ``X_r``-coefficient of ``[X_k, X_{k+1}]`` and confirm
    by re-assembly.  ``basis`` optionally lists the claimed ``X_0 .. X_n`` as
    vectors of ``g``."""
    if basis is not None:
        g, _ = change_basis(g, basis, label_base=0)
    n = g.dim - 1
    if n < 3:
        if n >= 2 and g == model_filiform(n):
            return {}
        raise NotAdaptedError("basis is not adapted: the law differs from L_n", None)
    coeffs = {}
    for k, r in delta_set(n):
        c = g.basis_bracket(k, k + 1)[r]
        if c:
            coeffs[(k, r)] = c
    rebuilt = LieAlgebra(n + 1, _law_brackets(n, coeffs), label_base=0, check=False)
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            if g.basis_bracket(a, b) != rebuilt.basis_bracket(a, b):
                raise NotAdaptedError(
                    f"basis is not adapted: [X{a}, X{b}] is {[str(x) for x in g.basis_bracket(a, b)]}, "
                    f"adapted law predicts {[str(x) for x in rebuilt.basis_bracket(a, b)]}", (a, b))
    return coeffs


def law_of(g: LieAlgebra) -> FiliformLaw:
    """Wrap an algebra already in an adapted basis as a :class:`FiliformLaw`."""
    coeffs = extract(g)
    return FiliformLaw(g.dim - 1, tuple(sorted(coeffs.items())), g)


@dataclass(frozen=True)
class ContactCriterionReport:
    p: int
    values: tuple  # A_1 .. A_{p-1}
    verdict: bool

    def A(self, j: int) -> Fraction:
        return self.values[j - 1]


def criterion_values(n: int, coeffs: Mapping) -> tuple:
    """``A_j = sum_{s=0}^{j-1} (-1)^s a_{p-j+s, 2p-2(j-s-1)} C_{2j-s-2}^s`` for ``j = 1..p-1``."""
    if n % 2:
        raise DimensionError("the criterion applies to odd total dimension 2p+1 (n even)")
    p = n // 2
    delta = delta_set(n) if n >= 3 else DeltaSet(n, ())
    values = []
    for j in range(1, p):
        total = Fraction(0)
        for s in range(j):
            key = (p - j + s, 2 * p - 2 * (j - s - 1))
            if key not in delta:
                log.warning("criterion index %s outside the admissible set; treated as 0", key)
                continue
            total += (-1) ** s * as_fraction(coeffs.get(key, 0)) * binom(2 * j - s - 2, s)
        values.append(total)
    return tuple(values)


def contact_criterion(law: FiliformLaw | LieAlgebra) -> ContactCriterionReport:
    """Existence of a contact form on a ``(2p+1)``-dimensional filiform law."""
    if isinstance(law, LieAlgebra):
        law = law_of(law)
    if law.n % 2:
        raise DimensionError("contact criterion needs odd total dimension")
    vals = criterion_values(law.n, law.coefficient_map)
    return ContactCriterionReport(law.n // 2, vals, all(v != 0 for v in vals))


@dataclass(frozen=True)
class NormalFormStep:
    target: int  # filiform label m whose coefficient was cleared
    generator: int  # filiform label k of ad X_k
    scalar: Fraction


@dataclass(frozen=True)
class NormalFormResult:
    automorphism: LinearMap
    beta: KForm
    steps: tuple


def _exp_ad(g: LieAlgebra, gen: int, c: Fraction) -> Matrix:
    """``exp(c · ad X)`` for the 0-based basis position ``gen``."""
    return nilpotent_exp(g.ad(unit_vector(g.dim, gen)).scale(c))


def normal_form(g: LieAlgebra, alpha: KForm) -> NormalFormResult:
    """Automorphism ``phi`` with ``phi^* alpha = b_{2p} alpha_{2p}``.

    Clears the coefficient of ``alpha_m`` for ``m = 2p-1, ..., 0`` with
    ``exp(c ad X_{2p-m-1})``, ``c = -b_m / alpha([X_{2p-m-1}, X_m])``.
    """
    from .structures import is_contact

    law_of(g)  # raises NotAdaptedError when the basis is not adapted
    if g.dim % 2 == 0:
        raise DimensionError("contact forms live on odd-dimensional algebras")
    if not is_contact(g, alpha):
        raise NotContactError("input 1-form is not a contact form")
    n = g.dim - 1  # top label 2p
    b_top = alpha.coefficient((n + 1,))
    current = alpha
    total = Matrix.identity(g.dim)
    steps = []
    for m in range(n - 1, -1, -1):
        bm = current.coefficient((m + 1,))
        if not bm:
            continue
        gen = n - m - 1
        lam = current.evaluate(g.basis_bracket(gen, m))
        if not lam:
            raise NormalFormError(
                f"alpha([X{gen}, X{m}]) vanishes; cannot clear the alpha_{m} coefficient")
        c = -bm / lam
        step = _exp_ad(g, gen, c)
        nxt = pullback(LinearMap(g, g, step), current)
        if nxt.coefficient((m + 1,)) or any(nxt.coefficient((t + 1,)) for t in range(m + 1, n)) \
                or nxt.coefficient((n + 1,)) != b_top:
            raise NormalFormError(f"clearing alpha_{m} with exp({c} ad X{gen}) disturbed the form: {nxt!r}")
        total = total @ step
        current = nxt
        steps.append(NormalFormStep(m, gen, c))
    phi = LinearMap(g, g, total)
    beta = KForm(g.dim, 1, {(n + 1,): b_top})
    if pullback(phi, alpha) != beta:
        raise NormalFormError("accumulated automorphism does not pull alpha back to the normal form")
    rep = verify_morphism(phi)
    if not rep.is_isomorphism:
        raise NormalFormError("accumulated map is not an automorphism")
    return NormalFormResult(phi, beta, tuple(steps))


@dataclass(frozen=True)
class GeneralNormalFormOutcome:
    result: NormalFormResult | None
    diagnostic: str | None


def normal_form_nilpotent(g: LieAlgebra, alpha: KForm) -> GeneralNormalFormOutcome:
    """Best-effort clearing loop for contact forms on nilpotent algebras whose
    centre is spanned by the last basis vector.

    Never raises on failure to reduce; returns a diagnostic instead.
    """
    from .lie import center
    from .structures import is_contact

    n = g.dim
    if n % 2 == 0 or not is_contact(g, alpha):
        return GeneralNormalFormOutcome(None, "input is not a contact form on an odd-dimensional algebra")
    z = center(g)
    if z.basis != (unit_vector(n, n - 1),):
        return GeneralNormalFormOutcome(None, "centre is not spanned by the last basis vector")
    b_top = alpha.coefficient((n,))
    current, total, steps = alpha, Matrix.identity(n), []
    for m in range(n - 2, -1, -1):
        bm = current.coefficient((m + 1,))
        if not bm:
            continue
        for gen in range(n):
            lam = current.evaluate(g.basis_bracket(gen, m))
            if not lam:
                continue
            c = -bm / lam
            step = _exp_ad(g, gen, c)
            nxt = pullback(LinearMap(g, g, step), current)
            if (not nxt.coefficient((m + 1,))
                    and not any(nxt.coefficient((t + 1,)) for t in range(m + 1, n - 1))
                    and nxt.coefficient((n,)) == b_top):
                total, current = total @ step, nxt
                steps.append(NormalFormStep(m, gen, c))
                break
        else:
            return GeneralNormalFormOutcome(
                None, f"no single inner step clears the coefficient of basis index {m + 1}")
    phi = LinearMap(g, g, total)
    return GeneralNormalFormOutcome(NormalFormResult(phi, current, tuple(steps)), None)
