"""Exact integer, rational and modular linear algebra.

Matrices are plain row lists of Python ints. Nothing here touches floating point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy.ntheory import isprime

Matrix = list[list[int]]

# A Mersenne prime large enough that a random nonsingular integer matrix of the
# sizes we meet is almost never singular modulo it.
_CERT_PRIME = (1 << 61) - 1


class AlgebraError(ValueError):
    pass


def _copy(m: Sequence[Sequence[int]]) -> Matrix:
    rows = [list(map(int, r)) for r in m]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise AlgebraError("matrix rows have different lengths")
    return rows


def _shape(m: Sequence[Sequence[int]]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not isprime(p):
        raise AlgebraError(f"{p!r} is not prime")


def _bareiss(m: Sequence[Sequence[int]]) -> tuple[int, int]:
    """Fraction-free elimination. Returns (rank, last pivot with row-swap sign).

    For a square nonsingular matrix the second value is the determinant.
    """
    a = _copy(m)
    rows, cols = _shape(a)
    rank, prev, sign = 0, 1, 1
    for col in range(cols):
        if rank == rows:
            break
        piv = next((i for i in range(rank, rows) if a[i][col]), None)
        if piv is None:
            continue
        if piv != rank:
            a[piv], a[rank] = a[rank], a[piv]
            sign = -sign
        p = a[rank][col]
        prow = a[rank]
        for i in range(rank + 1, rows):
            ri = a[i]
            f = ri[col]
            for j in range(col + 1, cols):
                ri[j] = (ri[j] * p - f * prow[j]) // prev
            ri[col] = 0
        prev = p
        rank += 1
    return rank, sign * prev


def rank_over_rationals(m: Sequence[Sequence[int]]) -> int:
    return _bareiss(m)[0]


def determinant(m: Sequence[Sequence[int]]) -> int:
    rows, cols = _shape(m)
    if rows != cols:
        raise AlgebraError("determinant of a non-square matrix")
    if rows == 0:
        return 1
    rank, d = _bareiss(m)
    return d if rank == rows else 0


def rank_mod_p(m: Sequence[Sequence[int]], p: int) -> int:
    return len(_rref_mod_p(m, p)[1])


def _rref_mod_p(m: Sequence[Sequence[int]], p: int) -> tuple[Matrix, list[int]]:
    a = [[x % p for x in r] for r in _copy(m)]
    rows, cols = _shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace_mod_p(m: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of ``m`` over F_p (one vector per free column)."""
    require_prime(p)
    a, pivots = _rref_mod_p(m, p)
    cols = _shape(a)[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [0] * cols
        vec[f] = 1
        for r, c in enumerate(pivots):
            vec[c] = (-a[r][f]) % p
        basis.append(vec)
    return basis


def nullspace_over_rationals(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Right-kernel basis over Q, each vector scaled to coprime integers."""
    a = [[Fraction(x) for x in r] for r in _copy(m)]
    rows, cols = _shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(cols) if c not in set(pivots)):
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -a[i][f]
        scale = 1
        for x in vec:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        ints = [int(x * scale) for x in vec]
        g = 0
        for x in ints:
            g = gcd(g, x)
        basis.append([x // g for x in ints])
    return basis


def is_nonsingular(m: Sequence[Sequence[int]]) -> bool:
    """Exact nonsingularity test for a square integer matrix.

    Full rank modulo a prime certifies full rank over Q; only a modular zero
    falls back to exact elimination.
    """
    rows, cols = _shape(m)
    if rows != cols:
        raise AlgebraError("nonsingularity of a non-square matrix")
    if rank_mod_p(m, _CERT_PRIME) == rows:
        return True
    return rank_over_rationals(m) == rows


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``left @ m @ right == diag(factors)`` with unimodular ``left``/``right``."""

    factors: tuple[int, ...]
    rank: int
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithForm:
    a = _copy(m)
    rows, cols = _shape(a)
    left = [[int(i == j) for j in range(rows)] for i in range(rows)]
    right = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):  # col dst += k * col src
        for r in a:
            r[dst] += k * r[src]
        for r in right:
            r[dst] += k * r[src]

    rank = 0
    for t in range(min(rows, cols)):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        rank += 1

    factors = tuple(a[i][i] for i in range(min(rows, cols)))
    return SmithForm(factors, rank, tuple(map(tuple, left)), tuple(map(tuple, right)))


# --------------------------------------------------------------------------
# torus points and torus kernels


@dataclass(frozen=True, order=True)
class TorusPoint:
    """Point of R^2/Z^2 with exact coordinates reduced into [0, 1)."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x) % 1)
        object.__setattr__(self, "y", Fraction(self.y) % 1)

    def __add__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(self.x - other.x, self.y - other.y)

    def __neg__(self) -> TorusPoint:
        return TorusPoint(-self.x, -self.y)

    def __mul__(self, k: int) -> TorusPoint:
        if not isinstance(k, int):
            return NotImplemented
        return TorusPoint(k * self.x, k * self.y)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


ORIGIN = TorusPoint(Fraction(0), Fraction(0))


def embed_fp_diagonally(value: int, p: int) -> TorusPoint:
    """Send a in Z/pZ to (a/p, a/p) in R^2/Z^2."""
    require_prime(p)
    if not isinstance(value, int) or not 0 <= value < p:
        raise AlgebraError(f"value {value!r} not in [0, {p})")
    return TorusPoint(Fraction(value, p), Fraction(value, p))


@dataclass(frozen=True)
class KernelSize:
    """Size of {x : m x = 0} on a torus power: FINITE(count) or INFINITE(dimension)."""

    finite: bool
    value: int

    @property
    def kind(self) -> str:
        return "FINITE" if self.finite else "INFINITE"

    def __str__(self) -> str:
        return f"{self.kind}({self.value})"


def torus_kernel(m: Sequence[Sequence[int]], torus_dim: int = 2) -> KernelSize:
    rows, cols = _shape(m)
    if rows != cols:
        raise AlgebraError("torus kernel needs a square matrix")
    if rows == 0:
        return KernelSize(True, 1)
    rank, det = _bareiss(m)
    if rank == rows:
        return KernelSize(True, abs(det) ** torus_dim)
    return KernelSize(False, torus_dim * (rows - rank))


def circle_kernel_points(m: Sequence[Sequence[int]]) -> list[tuple[Fraction, ...]]:
    """All x in (R/Z)^n with m x = 0, read off the Smith transforms.

    With ``L m R = D`` the substitution ``x = R y`` decouples the system into
    ``d_i y_i = 0``, so ``y_i`` ranges over multiples of ``1/d_i``.
    """
    rows, cols = _shape(m)
    if rows != cols:
        raise AlgebraError("torus kernel needs a square matrix")
    snf = smith_normal_form(m)
    if snf.rank < cols:
        raise AlgebraError("kernel is infinite; no finite point list")
    ranges = [[Fraction(k, d) for k in range(d)] for d in snf.factors]
    pts = set()
    for y in itertools.product(*ranges):
        pts.add(tuple(sum((r * yi for r, yi in zip(row, y)), Fraction(0)) % 1
                      for row in snf.right))
    return sorted(pts)


def torus_kernel_points(m: Sequence[Sequence[int]]) -> list[tuple[TorusPoint, ...]]:
    """All solutions on (R^2/Z^2)^n; the two torus coordinates decouple."""
    circle = circle_kernel_points(m)
    return [tuple(TorusPoint(x, y) for x, y in zip(xs, ys))
            for xs in circle for ys in circle]
