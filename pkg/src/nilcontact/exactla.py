"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`; no value is ever
rounded.  Elimination is plain Gauss-Jordan over the rationals, which keeps
entries in lowest terms at every step.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import DimensionError, NotNilpotentError

Vector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*([+\-−]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (optional sign, ASCII or Unicode minus)."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    sign, num, den = m.groups()
    den = int(den) if den is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(int(num), den)
    return -value if sign in ("-", "−") else value


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def vector(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    """Standard basis vector with a 1 at 0-based position ``i``."""
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


def add_scaled(acc: list, v: Sequence[Fraction], c: Fraction) -> None:
    if c:
        for i, x in enumerate(v):
            if x:
                acc[i] += c * x


@dataclass(frozen=True)
class Matrix:
    """Dense exact matrix stored row-major as nested tuples."""

    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None) -> "Matrix":
        rows = tuple(vector(r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, cols, nrows: int) -> "Matrix":
        cols = [vector(c) for c in cols]
        return cls.from_rows(zip(*cols), len(cols)) if cols else cls.zeros(nrows, 0)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols, tuple(zero_vector(ncols) for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows
                      else tuple(() for _ in range(self.ncols)))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0))
                     for r in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.rows
        return Matrix(self.nrows, other.ncols, tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols)
            for r in self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return Matrix(self.nrows, self.ncols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = as_fraction(c)
        return Matrix(self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def to_strings(self):
        return [[format_rational(a) for a in r] for r in self.rows]


def rref(rows, ncols: int):
    """Reduced row echelon form.  Returns ``(nonzero_rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        if inv != 1:
            m[r] = [x * inv for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                for j in range(c, ncols):
                    if pr[j]:
                        mi[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def kernel(m: Matrix) -> "Subspace":
    """Null space of ``m`` as a canonical subspace of ``QQ^ncols``."""
    red, pivots = rref(m.rows, m.ncols)
    free = [j for j in range(m.ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return Subspace.span(basis, m.ncols)


@dataclass(frozen=True)
class Solution:
    particular: Vector
    homogeneous: "Subspace"


def solve(m: Matrix, rhs: Sequence) -> Solution | None:
    """Solve ``m x = rhs`` exactly; ``None`` when the system is inconsistent."""
    rhs = vector(rhs)
    if len(rhs) != m.nrows:
        raise DimensionError("right-hand side length does not match row count")
    aug = [r + (b,) for r, b in zip(m.rows, rhs)]
    red, pivots = rref(aug, m.ncols + 1)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[m.ncols]
    return Solution(tuple(x), kernel(m))


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise DimensionError("only square matrices are invertible")
    n = m.nrows
    aug = [r + unit_vector(n, i) for i, r in enumerate(m.rows)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix(n, n, tuple(r[n:] for r in red))


def determinant(m: Matrix) -> Fraction:
    if not m.is_square():
        raise DimensionError("determinant of a non-square matrix")
    a = [list(r) for r in m.rows]
    n = m.nrows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


def nilpotent_exp(m: Matrix) -> Matrix:
    """``sum_i m^i / i!`` for a nilpotent square matrix (finite, exact)."""
    if not m.is_square():
        raise DimensionError("exponential of a non-square matrix")
    n = m.nrows
    result = Matrix.identity(n)
    power = Matrix.identity(n)
    for i in range(1, n + 1):
        power = power @ m
        if power.is_zero():
            return result
        result = result + power.scale(Fraction(1, factorial(i)))
    raise NotNilpotentError("matrix is not nilpotent (m^n != 0)")


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``QQ^ambient`` stored by its reduced echelon basis.

    The echelon basis is canonical, so ``==`` is subspace equality.
    """

    ambient: int
    basis: tuple

    @classmethod
    def span(cls, vectors, ambient: int) -> "Subspace":
        vectors = [vector(v) for v in vectors]
        if any(len(v) != ambient for v in vectors):
            raise DimensionError("vector length differs from ambient dimension")
        red, _ = rref(vectors, ambient)
        return cls(ambient, tuple(red))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, tuple(unit_vector(ambient, i) for i in range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> list:
        return [next(j for j, x in enumerate(v) if x) for v in self.basis]

    def contains(self, v) -> bool:
        v = list(vector(v))
        for b, p in zip(self.basis, self.pivots()):
            if v[p]:
                add_scaled(v, b, -v[p])
        return not any(v)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient)

    def coordinates(self, v) -> Vector:
        """Coordinates of ``v`` in the echelon basis; ``ValueError`` if outside."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(Fraction(v[p]) for p in self.pivots())

    def complement_indices(self) -> list:
        """Lexicographically first coordinate indices completing this basis."""
        piv = set(self.pivots())
        return [j for j in range(self.ambient) if j not in piv]

    def complement_in(self, larger: "Subspace") -> list:
        """Vectors of ``larger`` extending this basis to a basis of ``larger``.

        Chosen greedily from the echelon basis of ``larger``, in order.
        """
        chosen = []
        current = self
        for v in larger.basis:
            if not current.contains(v):
                chosen.append(v)
                current = Subspace.span(current.basis + (v,), self.ambient)
        return chosen
