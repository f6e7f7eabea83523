"""Lie algebras given by exact structure constants.

Basis vectors are indexed from 1 in the public bracket tables (``X_1 ... X_n``)
while coordinate vectors are ordinary Python sequences.  Algebras presented in
the filiform convention ``X_0 ... X_n`` keep the same storage and only carry
``label_base = 0`` for display.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .errors import (DimensionError, JacobiError, NotAnIdealError, NotClosedError,
                     NotNilpotentError)
from .exactla import (Matrix, Subspace, add_scaled, as_fraction, inverse, kernel, rref,
                      unit_vector, vector, zero_vector)


@dataclass(frozen=True)
class JacobiViolation:
    i: int
    j: int
    k: int
    residual: tuple

    def __str__(self):
        return f"Jacobi fails on (X{self.i}, X{self.j}, X{self.k}): residual {list(map(str, self.residual))}"


class LieAlgebra:
    """A finite-dimensional Lie algebra over QQ.

    ``brackets`` maps ``(i, j)`` (1-based) to either ``{k: c}`` or a full
    coordinate vector.  Pairs with ``i > j`` are folded in by antisymmetry.
    The Jacobi identity is checked unless ``check=False``.
    """

    __slots__ = ("dim", "name", "label_base", "_sc", "_table", "_cache")

    def __init__(self, dim: int, brackets: Mapping | None = None, name: str | None = None,
                 label_base: int = 1, check: bool = True):
        if dim < 1:
            raise DimensionError("a Lie algebra needs dimension >= 1")
        sc: dict = {}
        for (i, j), val in (brackets or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise DimensionError(f"bracket index ({i}, {j}) out of range 1..{dim}")
            if isinstance(val, Mapping):
                coeffs = {int(k): as_fraction(c) for k, c in val.items()}
            else:
                val = vector(val)
                if len(val) != dim:
                    raise DimensionError(f"bracket value for ({i}, {j}) has wrong length")
                coeffs = {k + 1: c for k, c in enumerate(val)}
            if any(not 1 <= k <= dim for k in coeffs):
                raise DimensionError(f"bracket value index out of range for ({i}, {j})")
            if i == j:
                if any(coeffs.values()):
                    raise ValueError(f"[X{i}, X{i}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            cur = sc.setdefault((i, j), {})
            for k, c in coeffs.items():
                cur[k] = cur.get(k, Fraction(0)) + sign * c
        self.dim = dim
        self.name = name
        self.label_base = label_base
        self._sc = {}
        for key in sorted(sc):
            nz = {k: c for k, c in sorted(sc[key].items()) if c}
            if nz:
                self._sc[key] = nz
        table = [[None] * dim for _ in range(dim)]
        z = zero_vector(dim)
        for a in range(dim):
            for b in range(dim):
                table[a][b] = z
        for (i, j), coeffs in self._sc.items():
            v = [Fraction(0)] * dim
            for k, c in coeffs.items():
                v[k - 1] = c
            table[i - 1][j - 1] = tuple(v)
            table[j - 1][i - 1] = tuple(-x for x in v)
        self._table = table
        self._cache = {}
        if check:
            bad = verify_jacobi(self)
            if bad:
                raise JacobiError(f"not a Lie algebra ({self.name or 'unnamed'}): {bad[0]}", bad)

    def structure_constants(self) -> dict:
        return {key: dict(v) for key, v in self._sc.items()}

    def basis_bracket(self, a: int, b: int) -> tuple:
        """``[e_a, e_b]`` for 0-based positions."""
        return self._table[a][b]

    def basis_vector(self, i: int) -> tuple:
        """``X_i`` as a coordinate vector (1-based index)."""
        return unit_vector(self.dim, i - 1)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        return bracket(self, x, y)

    def ad(self, x: Sequence) -> Matrix:
        x = vector(x)
        cols = [bracket(self, x, unit_vector(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def is_abelian(self) -> bool:
        return not self._sc

    def label(self, i: int) -> str:
        """Display name of the 1-based basis index ``i``."""
        return f"X{i - 1 + self.label_base}"

    def renamed(self, name: str | None, label_base: int | None = None) -> "LieAlgebra":
        out = LieAlgebra.__new__(LieAlgebra)
        out.dim, out._sc, out._table, out._cache = self.dim, self._sc, self._table, {}
        out.name = name
        out.label_base = self.label_base if label_base is None else label_base
        return out

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self._sc == other._sc

    def __hash__(self):
        return hash((self.dim, tuple((k, tuple(v.items())) for k, v in self._sc.items())))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<LieAlgebra{label} dim={self.dim} brackets={len(self._sc)}>"

    def describe(self) -> str:
        lines = []
        for (i, j), coeffs in self._sc.items():
            rhs = " + ".join(f"{c}·{self.label(k)}" if c != 1 else self.label(k)
                             for k, c in coeffs.items()).replace("+ -", "- ")
            lines.append(f"[{self.label(i)}, {self.label(j)}] = {rhs}")
        return "\n".join(lines) if lines else "(abelian)"


def abelian(n: int, name: str | None = None) -> LieAlgebra:
    return LieAlgebra(n, {}, name=name or f"R^{n}")


def heisenberg() -> LieAlgebra:
    return LieAlgebra(3, {(1, 2): {3: 1}}, name="Heisenberg")


def bracket(g: LieAlgebra, x: Sequence, y: Sequence) -> tuple:
    """Bilinear antisymmetric extension of the basis bracket table."""
    if len(x) != g.dim or len(y) != g.dim:
        raise DimensionError(f"vectors must have length {g.dim}")
    out = [Fraction(0)] * g.dim
    for a, xa in enumerate(x):
        if not xa:
            continue
        row = g._table[a]
        for b, yb in enumerate(y):
            if yb and a != b:
                add_scaled(out, row[b], xa * yb)
    return tuple(Fraction(v) for v in out)


def verify_jacobi(g: LieAlgebra) -> list:
    """All basis triples ``i < j < k`` violating Jacobi, with residuals."""
    n = g.dim
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ei, ej, ek = (unit_vector(n, t) for t in (i, j, k))
                r = [Fraction(0)] * n
                add_scaled(r, bracket(g, g._table[i][j], ek), 1)
                add_scaled(r, bracket(g, g._table[j][k], ei), 1)
                add_scaled(r, bracket(g, g._table[k][i], ej), 1)
                if any(r):
                    bad.append(JacobiViolation(i + 1, j + 1, k + 1, tuple(r)))
    return bad


def bracket_subspaces(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    """``span [a, b]``."""
    return Subspace.span([bracket(g, x, y) for x in a.basis for y in b.basis], g.dim)


@dataclass(frozen=True)
class SeriesReport:
    subspaces: tuple
    dims: tuple
    nilindex: int | None
    is_nilpotent: bool
    is_filiform: bool


def lower_central_series(g: LieAlgebra) -> SeriesReport:
    """``C^0 = g, C^i = [g, C^{i-1}]`` until it stabilises."""
    cached = g._cache.get("lcs")
    if cached is not None:
        return cached
    full = Subspace.full(g.dim)
    series = [full]
    while True:
        nxt = bracket_subspaces(g, full, series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
        if nxt.dim == 0:
            break
    dims = tuple(s.dim for s in series)
    nilpotent = dims[-1] == 0
    n = g.dim
    filiform = (nilpotent and n >= 3 and len(dims) == n
                and all(dims[k] == n - k - 1 for k in range(1, n)))
    report = SeriesReport(tuple(series), dims, len(dims) - 1 if nilpotent else None,
                          nilpotent, filiform)
    g._cache["lcs"] = report
    return report


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g).is_nilpotent


def is_filiform(g: LieAlgebra) -> bool:
    return lower_central_series(g).is_filiform


def derived_series(g: LieAlgebra) -> list:
    series = [Subspace.full(g.dim)]
    while True:
        nxt = bracket_subspaces(g, series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)


def centralizer_preimage(g: LieAlgebra, sub: Subspace) -> Subspace:
    """``{x : [x, g] ⊆ sub}``."""
    n = g.dim
    # Rows: for each basis e_b, the components of [x, e_b] transverse to sub.
    transverse = sub.complement_indices()
    piv = sub.pivots()
    rows = []
    for b in range(n):
        cols = []
        for a in range(n):
            v = list(g._table[a][b])
            for basis_vec, p in zip(sub.basis, piv):
                if v[p]:
                    add_scaled(v, basis_vec, -v[p])
            cols.append(v)
        for t in transverse:
            rows.append([cols[a][t] for a in range(n)])
    if not rows:
        return Subspace.full(n)
    return kernel(Matrix.from_rows(rows, n))


def center(g: LieAlgebra) -> Subspace:
    return centralizer_preimage(g, Subspace.zero(g.dim))


def upper_central_series(g: LieAlgebra) -> list:
    series = [Subspace.zero(g.dim)]
    while True:
        nxt = centralizer_preimage(g, series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)


class LinearMap:
    """Exact linear map ``source -> target`` (matrix is target.dim x source.dim)."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: LieAlgebra, target: LieAlgebra, matrix: Matrix):
        if not isinstance(matrix, Matrix):
            matrix = Matrix.from_rows(matrix, source.dim)
        if matrix.shape != (target.dim, source.dim):
            raise DimensionError(
                f"matrix shape {matrix.shape} does not match {target.dim}x{source.dim}")
        self.source, self.target, self.matrix = source, target, matrix

    @classmethod
    def identity(cls, g: LieAlgebra) -> "LinearMap":
        return cls(g, g, Matrix.identity(g.dim))

    def __call__(self, v) -> tuple:
        return self.matrix.apply(vector(v))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition ``self ∘ other``."""
        if other.target.dim != self.source.dim:
            raise DimensionError("maps are not composable")
        return LinearMap(other.source, self.target, self.matrix @ other.matrix)

    def is_invertible(self) -> bool:
        return self.matrix.is_square() and self.matrix.rank() == self.matrix.nrows

    def inverse(self) -> "LinearMap":
        return LinearMap(self.target, self.source, inverse(self.matrix))

    def __repr__(self):
        return f"<LinearMap {self.source.name or self.source.dim} -> {self.target.name or self.target.dim}>"


class Quotient(NamedTuple):
    algebra: LieAlgebra
    projection: LinearMap
    section: LinearMap  # linear lift quotient -> g onto the coordinate complement


def _reduce_mod(sub: Subspace, v) -> list:
    v = list(v)
    for b, p in zip(sub.basis, sub.pivots()):
        if v[p]:
            add_scaled(v, b, -v[p])
    return v


def quotient(g: LieAlgebra, ideal: Subspace, name: str | None = None) -> Quotient:
    """``g / ideal`` on the lexicographically first coordinate complement."""
    if ideal.ambient != g.dim:
        raise DimensionError("ideal lives in a different ambient space")
    for a in range(g.dim):
        for v in ideal.basis:
            if not ideal.contains(bracket(g, unit_vector(g.dim, a), v)):
                raise NotAnIdealError(f"[{g.label(a + 1)}, {list(map(str, v))}] leaves the subspace")
    comp = ideal.complement_indices()
    m = len(comp)
    if m == 0:
        raise DimensionError("quotient by the whole algebra is zero-dimensional")

    def project(v):
        r = _reduce_mod(ideal, v)
        return tuple(r[j] for j in comp)

    brackets = {}
    for s in range(m):
        for t in range(s + 1, m):
            val = project(g._table[comp[s]][comp[t]])
            if any(val):
                brackets[(s + 1, t + 1)] = val
    q = LieAlgebra(m, brackets, name=name, label_base=g.label_base)
    proj = LinearMap(g, q, Matrix.from_columns([project(unit_vector(g.dim, a)) for a in range(g.dim)], m))
    sect = LinearMap(q, g, Matrix.from_columns([unit_vector(g.dim, j) for j in comp], g.dim))
    return Quotient(q, proj, sect)


def induced_quotient_map(f: LinearMap, src: Quotient, dst: Quotient) -> LinearMap:
    """The map ``g1/I1 -> g2/I2`` induced by ``f`` (assumes ``f(I1) ⊆ I2``)."""
    return dst.projection @ f @ src.section


class Extension(NamedTuple):
    algebra: LieAlgebra
    injection: LinearMap  # R -> h, e1 |-> Z
    projection: LinearMap  # h -> g


def central_extension(g: LieAlgebra, w, name: str | None = None) -> Extension:
    """``h = g ⊕ RZ`` with ``[x, y]' = [x, y] + w(x, y) Z`` for a closed 2-form ``w``."""
    from .exterior import ce_differential

    if w.dim != g.dim or (w.degree != 2 and not w.is_zero()):
        raise DimensionError("central extension needs a 2-form on the algebra")
    dw = ce_differential(g, w)
    if not dw.is_zero():
        raise NotClosedError(f"2-form is not a cocycle: dw = {dw.pretty(g.label_base)}")
    n = g.dim
    brackets = {key: dict(v) for key, v in g._sc.items()}
    for (i, j), c in w.terms.items():
        brackets.setdefault((i, j), {})[n + 1] = c
    h = LieAlgebra(n + 1, brackets, name=name, label_base=g.label_base)
    line = abelian(1, name="R")
    inj = LinearMap(line, h, Matrix.from_columns([unit_vector(n + 1, n)], n + 1))
    proj = LinearMap(h, g, Matrix.from_rows([unit_vector(n + 1, i) for i in range(n)], n + 1))
    return Extension(h, inj, proj)


def verify_derivation(g: LieAlgebra, d: LinearMap | Matrix) -> bool:
    """Leibniz ``D[x, y] = [Dx, y] + [x, Dy]`` on all basis pairs."""
    m = d.matrix if isinstance(d, LinearMap) else d
    if m.shape != (g.dim, g.dim):
        raise DimensionError("derivation must be an endomorphism of the algebra")
    n = g.dim
    cols = m.columns()
    for i in range(n):
        for j in range(i + 1, n):
            lhs = m.apply(g._table[i][j])
            rhs = [Fraction(0)] * n
            add_scaled(rhs, bracket(g, cols[i], unit_vector(n, j)), 1)
            add_scaled(rhs, bracket(g, unit_vector(n, i), cols[j]), 1)
            if tuple(lhs) != tuple(rhs):
                return False
    return True


@dataclass(frozen=True)
class DerivationReport:
    basis: tuple
    solvable: bool
    derived_dims: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def _matrix_span(mats, n):
    flat = [tuple(x for row in m.rows for x in row) for m in mats]
    red, _ = rref(flat, n * n)
    return [Matrix.from_rows([r[i * n:(i + 1) * n] for i in range(n)], n) for r in red]


def derivation_algebra(g: LieAlgebra) -> DerivationReport:
    """Basis of ``Der g`` and the solvability verdict from its derived series."""
    n = g.dim
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            cij = g._table[i][j]
            for t in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    if cij[k]:
                        row[t * n + k] += cij[k]
                for r in range(n):
                    c1 = g._table[r][j][t]
                    if c1:
                        row[r * n + i] -= c1
                    c2 = g._table[i][r][t]
                    if c2:
                        row[r * n + j] -= c2
                if any(row):
                    rows.append(row)
    if rows:
        ker = kernel(Matrix.from_rows(rows, n * n))
        vecs = ker.basis
    else:
        vecs = [unit_vector(n * n, u) for u in range(n * n)]
    mats = [Matrix.from_rows([v[r * n:(r + 1) * n] for r in range(n)], n) for v in vecs]
    basis = tuple(LinearMap(g, g, m) for m in mats)
    current = _matrix_span(mats, n)
    dims = [len(current)]
    for _ in range(n * n + 1):
        if not current:
            break
        comms = []
        for a in range(len(current)):
            for b in range(a + 1, len(current)):
                A, B = current[a], current[b]
                c = A @ B - B @ A
                if not c.is_zero():
                    comms.append(c)
        nxt = _matrix_span(comms, n)
        if len(nxt) == len(current):
            break
        current = nxt
        dims.append(len(current))
    return DerivationReport(basis, not current, tuple(dims))


class GradedResult(NamedTuple):
    algebra: LieAlgebra
    kind: str  # "L", "Q" or "not-filiform"
    degrees: tuple  # degree of each basis vector of gr g


def associated_graded(g: LieAlgebra) -> GradedResult:
    """``gr g = ⊕ C^{i-1}/C^i`` with degree-respecting brackets."""
    report = lower_central_series(g)
    if not report.is_nilpotent:
        raise NotNilpotentError("associated graded algebra needs a nilpotent input")
    series = report.subspaces
    new_basis, degrees = [], []
    for i in range(1, len(series)):
        for v in series[i].complement_in(series[i - 1]):
            new_basis.append(v)
            degrees.append(i)
    n = g.dim
    P = Matrix.from_columns(new_basis, n)
    Pinv = inverse(P)
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            target = degrees[a] + degrees[b]
            coords = Pinv.apply(bracket(g, new_basis[a], new_basis[b]))
            val = tuple(c if degrees[k] == target else Fraction(0) for k, c in enumerate(coords))
            if any(val):
                brackets[(a + 1, b + 1)] = val
    gr = LieAlgebra(n, brackets, name=f"gr {g.name}" if g.name else None, label_base=g.label_base)
    if not report.is_filiform:
        kind = "not-filiform"
    else:
        high = [k for k, d in enumerate(degrees) if d >= 2]
        kind = "Q" if any(any(gr._table[a][b]) for a in high for b in high) else "L"
    return GradedResult(gr, kind, tuple(degrees))


@dataclass(frozen=True)
class MorphismReport:
    is_homomorphism: bool
    is_isomorphism: bool
    failure: tuple | None = None  # first basis pair (1-based) where f[x,y] != [fx,fy]


def verify_morphism(f: LinearMap) -> MorphismReport:
    g, h, m = f.source, f.target, f.matrix
    cols = m.columns()
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            if m.apply(g._table[i][j]) != bracket(h, cols[i], cols[j]):
                return MorphismReport(False, False, (i + 1, j + 1))
    return MorphismReport(True, f.is_invertible())


def change_basis(g: LieAlgebra, new_basis: Sequence, name: str | None = None,
                 label_base: int | None = None) -> tuple:
    """Rewrite ``g`` in the basis ``new_basis`` (vectors in current coordinates).

    Returns ``(h, phi)`` where ``phi: h -> g`` sends the i-th basis vector of
    ``h`` to ``new_basis[i]``; ``phi`` is a Lie algebra isomorphism.
    """
    vecs = [vector(v) for v in new_basis]
    if len(vecs) != g.dim:
        raise DimensionError("a basis needs exactly dim vectors")
    P = Matrix.from_columns(vecs, g.dim)
    Pinv = inverse(P)
    brackets = {}
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            coords = Pinv.apply(bracket(g, vecs[a], vecs[b]))
            if any(coords):
                brackets[(a + 1, b + 1)] = coords
    h = LieAlgebra(g.dim, brackets, name=name or g.name,
                   label_base=g.label_base if label_base is None else label_base)
    return h, LinearMap(h, g, P)


def direct_sum(g: LieAlgebra, h: LieAlgebra, name: str | None = None) -> LieAlgebra:
    n = g.dim
    brackets = {key: dict(v) for key, v in g._sc.items()}
    for (i, j), coeffs in h._sc.items():
        brackets[(i + n, j + n)] = {k + n: c for k, c in coeffs.items()}
    return LieAlgebra(n + h.dim, brackets, name=name)
