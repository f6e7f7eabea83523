"""Contact and symplectic structures on Lie algebras.

Sign convention throughout: for the central extension ``h`` of ``(g, omega)``
the dual ``alpha`` of the new central vector satisfies ``pi^* omega = -d alpha``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from .errors import (DegenerateFormError, DimensionError, NilcontactError, NotClosedError,
                     NotContactError)
from .exactla import Matrix, solve, unit_vector, vector
from .exterior import (KForm, ce_differential, closed_forms, one_form_differentials, power,
                       pullback, sort_sign, top_coefficient, wedge)
from .lie import (LieAlgebra, LinearMap, Quotient, bracket, center, central_extension,
                  induced_quotient_map, is_filiform, quotient)

DEFAULT_BOUND = 100
EXACT_DIM_CAP = 9


@dataclass(frozen=True)
class ContactResult:
    """Outcome of the contact test; a certificate when ``holds`` is true."""

    holds: bool
    algebra: LieAlgebra
    alpha: KForm
    top_form: KForm
    top_coefficient: Fraction
    reason: str | None = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class SymplecticResult:
    holds: bool
    algebra: LieAlgebra
    omega: KForm
    closed: bool
    d_omega: KForm
    top_coefficient: Fraction
    reason: str | None = None  # "not-closed" or "degenerate"

    def __bool__(self):
        return self.holds


def is_contact(g: LieAlgebra, alpha: KForm) -> ContactResult:
    """``alpha ^ (d alpha)^p != 0`` on a ``(2p+1)``-dimensional algebra."""
    if g.dim % 2 == 0:
        raise DimensionError("contact forms need odd dimension")
    if alpha.dim != g.dim or (alpha.degree != 1 and not alpha.is_zero()):
        raise DimensionError("alpha must be a 1-form on the algebra")
    p = g.dim // 2
    top = wedge(alpha, power(ce_differential(g, alpha), p))
    c = top_coefficient(top)
    reason = None if c else "alpha ∧ (dα)^p vanishes"
    return ContactResult(bool(c), g, alpha, top, c, reason)


def is_symplectic(g: LieAlgebra, omega: KForm) -> SymplecticResult:
    """Closed (``d omega = 0``) and nondegenerate (``omega^p != 0``)."""
    if g.dim % 2:
        raise DimensionError("symplectic forms need even dimension")
    if omega.dim != g.dim or (omega.degree != 2 and not omega.is_zero()):
        raise DimensionError("omega must be a 2-form on the algebra")
    d_omega = ce_differential(g, omega)
    top = top_coefficient(power(omega, g.dim // 2))
    if not d_omega.is_zero():
        return SymplecticResult(False, g, omega, False, d_omega, top, "not-closed")
    if not top:
        return SymplecticResult(False, g, omega, True, d_omega, top, "degenerate")
    return SymplecticResult(True, g, omega, True, d_omega, top)


# Polynomials are dicts {exponent tuple: Fraction}; forms with polynomial
# coefficients are dicts {index tuple: polynomial}.

def _padd(p, q, c=1):
    out = dict(p)
    for e, v in q.items():
        s = out.get(e, Fraction(0)) + c * v
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e, Fraction(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pwedge(a, b):
    out = {}
    for ia, pa in a.items():
        for ib, pb in b.items():
            if set(ia) & set(ib):
                continue
            sign, key = sort_sign(ia + ib)
            out[key] = _padd(out.get(key, {}), _pmul(pa, pb), sign)
            if not out[key]:
                del out[key]
    return out


def _linear_poly_form(forms, nvars):
    """``sum_i t_i forms[i]`` with polynomial coefficients."""
    out = {}
    for i, f in enumerate(forms):
        e = tuple(1 if t == i else 0 for t in range(nvars))
        for idx, c in f.terms.items():
            out[idx] = _padd(out.get(idx, {}), {e: c})
            if not out[idx]:
                del out[idx]
    return out


def _peval(p, point):
    total = Fraction(0)
    for e, c in p.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term *= Fraction(x) ** k
        total += term
    return total


def _substitute(p, var, value):
    out = {}
    for e, c in p.items():
        v = c * Fraction(value) ** e[var] if e[var] else c
        if v:
            e2 = e[:var] + (0,) + e[var + 1:]
            s = out.get(e2, Fraction(0)) + v
            if s:
                out[e2] = s
            else:
                out.pop(e2, None)
    return out


def nonzero_point(p, nvars: int) -> tuple | None:
    """Integer point where the polynomial ``p`` is nonzero, or ``None`` if ``p == 0``.

    Variables are fixed one at a time, trying 0, 1, -1, 2, ...; at most
    ``deg + 1`` values are needed per variable.
    """
    if not p:
        return None
    point = []
    for var in range(nvars):
        deg = max(e[var] for e in p)
        candidates = [0] + [x for k in range(1, deg + 2) for x in (k, -k)]
        for t in candidates:
            q = _substitute(p, var, t)
            if q:
                p = q
                point.append(t)
                break
        else:  # pragma: no cover - impossible for a nonzero polynomial
            raise NilcontactError("failed to locate a nonzero point")
    return tuple(point)


def contact_polynomial(g: LieAlgebra) -> dict:
    """Top coefficient of ``alpha ^ (d alpha)^p`` as a polynomial in the
    coordinates of ``alpha = sum b_i alpha_i``."""
    n = g.dim
    alpha = _linear_poly_form([KForm.basis(n, i + 1) for i in range(n)], n)
    dalpha = _linear_poly_form(one_form_differentials(g), n)
    acc = {(): {(0,) * n: Fraction(1)}}
    for _ in range(n // 2):
        acc = _pwedge(acc, dalpha)
        if not acc:
            return {}
    acc = _pwedge(alpha, acc)
    return acc.get(tuple(range(1, n + 1)), {})


def symplectic_polynomial(g: LieAlgebra, basis: list) -> dict:
    """Top coefficient of ``(sum t_i w_i)^p`` over a basis of closed 2-forms."""
    m = len(basis)
    omega = _linear_poly_form(basis, m)
    acc = {(): {(0,) * m: Fraction(1)}}
    for _ in range(g.dim // 2):
        acc = _pwedge(acc, omega)
        if not acc:
            return {}
    return acc.get(tuple(range(1, g.dim + 1)), {})


class Existence(NamedTuple):
    answer: str  # "yes", "no" or "inconclusive"
    witness: KForm | None
    method: str


def exists_contact(g: LieAlgebra, mode: str = "exact", trials: int = 200, seed: int = 0,
                   bound: int = DEFAULT_BOUND, short_circuit: bool = True) -> Existence:
    """Decide (exact) or semi-decide (random) whether ``g`` carries a contact form."""
    if g.dim % 2 == 0:
        raise DimensionError("contact forms need odd dimension")
    n = g.dim
    if short_circuit and is_filiform(g):
        from .errors import NotAdaptedError
        from .filiform import contact_criterion, law_of
        try:
            law = law_of(g)
        except NotAdaptedError:
            law = None
        if law is not None:
            report = contact_criterion(law)
            witness = KForm.basis(n, n)
            if report.verdict:
                assert is_contact(g, witness)
                return Existence("yes", witness, "criterion")
            return Existence("no", None, "criterion")
    if mode == "exact":
        if n > EXACT_DIM_CAP:
            raise ValueError(f"exact mode is capped at dimension {EXACT_DIM_CAP}; use random mode")
        poly = contact_polynomial(g)
        point = nonzero_point(poly, n)
        if point is None:
            return Existence("no", None, "exact")
        witness = KForm.from_vector(point)
        if not is_contact(g, witness):  # pragma: no cover - guarded by construction
            raise NilcontactError("polynomial witness failed the direct contact test")
        return Existence("yes", witness, "exact")
    if mode == "random":
        rng = random.Random(seed)
        for _ in range(trials):
            cand = KForm.from_vector([rng.randint(-bound, bound) for _ in range(n)])
            if is_contact(g, cand):
                return Existence("yes", cand, "random")
        return Existence("inconclusive", None, "random")
    raise ValueError(f"unknown mode {mode!r}")


def exists_symplectic(g: LieAlgebra, mode: str = "exact", trials: int = 200, seed: int = 0,
                      bound: int = DEFAULT_BOUND) -> Existence:
    """Search the closed 2-forms for a nondegenerate one."""
    if g.dim % 2:
        raise DimensionError("symplectic forms need even dimension")
    basis = closed_forms(g, 2)
    if not basis:
        return Existence("no", None, mode)

    def combine(coeffs):
        out = KForm.zero(g.dim, 2)
        for c, w in zip(coeffs, basis):
            if c:
                out = out + w * c
        return out

    if mode == "exact":
        if g.dim > EXACT_DIM_CAP:
            raise ValueError(f"exact mode is capped at dimension {EXACT_DIM_CAP}; use random mode")
        point = nonzero_point(symplectic_polynomial(g, basis), len(basis))
        if point is None:
            return Existence("no", None, "exact")
        witness = combine(point)
        if not is_symplectic(g, witness):  # pragma: no cover
            raise NilcontactError("polynomial witness failed the direct symplectic test")
        return Existence("yes", witness, "exact")
    if mode == "random":
        rng = random.Random(seed)
        for _ in range(trials):
            cand = combine([rng.randint(-bound, bound) for _ in basis])
            if is_symplectic(g, cand):
                return Existence("yes", cand, "random")
        return Existence("inconclusive", None, "random")
    raise ValueError(f"unknown mode {mode!r}")


def _as_symplectic(g, omega) -> SymplecticResult:
    if isinstance(omega, SymplecticResult):
        if omega.algebra != g:
            raise ValueError("certificate belongs to a different algebra")
        cert = is_symplectic(g, omega.omega)
    else:
        cert = is_symplectic(g, omega)
    if not cert:
        if cert.reason == "not-closed":
            raise NotClosedError(f"omega is not closed: dω = {cert.d_omega.pretty(g.label_base)}")
        raise DegenerateFormError("omega is degenerate")
    return cert


def _as_contact(g, alpha) -> ContactResult:
    form = alpha.alpha if isinstance(alpha, ContactResult) else alpha
    cert = is_contact(g, form)
    if not cert:
        raise NotContactError("alpha is not a contact form")
    return cert


class Contactization(NamedTuple):
    algebra: LieAlgebra
    alpha: KForm
    certificate: ContactResult
    projection: LinearMap


def contactize(g: LieAlgebra, omega, name: str | None = None) -> Contactization:
    """Central extension by ``omega`` with its canonical contact form."""
    cert = _as_symplectic(g, omega)
    ext = central_extension(g, cert.omega, name=name or (f"{g.name}⊕_ω R" if g.name else None))
    h = ext.algebra
    alpha = KForm.basis(h.dim, h.dim)
    ccert = is_contact(h, alpha)
    if not ccert:
        raise NilcontactError("contactization produced a non-contact form")
    if pullback(ext.projection, cert.omega) != -ce_differential(h, alpha):
        raise NilcontactError("pi^* omega != -d alpha on the contactization")
    if is_filiform(g) and not is_filiform(h):
        raise NilcontactError("central extension of a filiform symplectic algebra is not filiform")
    return Contactization(h, alpha, ccert, ext.projection)


class Reduction(NamedTuple):
    algebra: LieAlgebra
    omega: KForm
    certificate: SymplecticResult
    projection: LinearMap
    quotient: Quotient


def reduce(g: LieAlgebra, alpha, name: str | None = None) -> Reduction:
    """Quotient by the centre with ``omega([x], [y]) = alpha([x, y])``."""
    cert = _as_contact(g, alpha)
    a = cert.alpha
    z = center(g)
    if z.dim == 0:
        raise ValueError("the centre is trivial; nothing to reduce by")
    gen = next((v for v in z.basis if a.evaluate(v)), None)
    if gen is None:
        raise ValueError("alpha vanishes on the whole centre")
    from .exactla import Subspace
    q = quotient(g, Subspace.span([gen], g.dim), name=name)
    k = q.algebra
    lifts = q.section.matrix.columns()
    terms = {}
    for s in range(k.dim):
        for t in range(s + 1, k.dim):
            c = a.evaluate(bracket(g, lifts[s], lifts[t]))
            if c:
                terms[(s + 1, t + 1)] = c
    omega = KForm(k.dim, 2, terms)
    scert = is_symplectic(k, omega)
    if not scert:
        raise NilcontactError(f"reduced form is not symplectic ({scert.reason})")
    if pullback(q.projection, omega) != -ce_differential(g, a):
        raise NilcontactError("pi^* omega != -d alpha after reduction")
    return Reduction(k, omega, scert, q.projection, q)


def reduced_isomorphism(phi: LinearMap, src: Reduction, dst: Reduction) -> LinearMap:
    """Map between reductions induced by a contacto-isomorphism ``phi: g1 -> g2``."""
    return induced_quotient_map(phi, src.quotient, dst.quotient)


class LSAProduct:
    """Left-symmetric product ``omega(x·y, z) = -omega(y, [x, z])``."""

    def __init__(self, g: LieAlgebra, omega, check: bool = True):
        cert = _as_symplectic(g, omega) if check else None
        w = (cert.omega if cert else omega)
        self.algebra = g
        self.omega = w
        n = g.dim
        W = w.to_matrix()
        Wt = W.T
        table = [[None] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                rhs = [-w.evaluate(unit_vector(n, b), g.basis_bracket(a, c)) for c in range(n)]
                sol = solve(Wt, rhs)
                if sol is None or sol.homogeneous.dim:
                    raise DegenerateFormError("omega is degenerate; the product is not defined")
                table[a][b] = sol.particular
        self.table = table

    def __call__(self, x, y) -> tuple:
        n = self.algebra.dim
        out = [Fraction(0)] * n
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if yb:
                    for t, v in enumerate(self.table[a][b]):
                        if v:
                            out[t] += xa * yb * v
        return tuple(out)

    def torsion_violations(self) -> list:
        """Basis pairs where ``x·y - y·x != [x, y]``."""
        g, n = self.algebra, self.algebra.dim
        bad = []
        for a in range(n):
            for b in range(a + 1, n):
                lhs = tuple(u - v for u, v in zip(self.table[a][b], self.table[b][a]))
                if lhs != g.basis_bracket(a, b):
                    bad.append((a + 1, b + 1))
        return bad

    def left_symmetry_violations(self) -> list:
        """Basis triples where the associator is not symmetric in its first two slots."""
        n = self.algebra.dim
        e = [unit_vector(n, a) for a in range(n)]

        def assoc(x, y, z):
            left = self(self(e[x], e[y]), e[z])
            right = self(e[x], self(e[y], e[z]))
            return tuple(l - r for l, r in zip(left, right))

        bad = []
        for a, b, c in product(range(n), repeat=3):
            if a < b and assoc(a, b, c) != assoc(b, a, c):
                bad.append((a + 1, b + 1, c + 1))
        return bad

    def is_zero(self) -> bool:
        return all(not any(v) for row in self.table for v in row)


def lsa_product(g: LieAlgebra, omega) -> LSAProduct:
    return LSAProduct(g, omega)
