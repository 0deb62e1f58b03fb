"""Weighted graph Laplacians and the 5/3 eigen-equation over F_p and Q.

The eigen-equation ``Delta lambda = (n/d) lambda`` with the normalized Laplacian
is stored with denominators cleared::

    d * sum_{w ~ v} lambda(w) + (n - d) * deg(v) * lambda(v) = 0

which for n/d = 5/3 reads ``3 * sum lambda(w) + 2 * deg(v) * lambda(v) = 0``.
One integer matrix therefore serves F_p, Q and torus-valued labelings.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .exact_algebra import AlgebraError, is_nonsingular, nullspace_mod_p, require_prime
from .graph_core import WeightedGraph, weighted_degree

EIGENVALUE = Fraction(5, 3)


class LaplacianError(ValueError):
    pass


@dataclass(frozen=True)
class ModularLabeling:
    """Vertex function into F_p, p >= 7 prime."""

    p: int
    values: Mapping[str, int]

    def __post_init__(self):
        try:
            require_prime(self.p)
        except AlgebraError as exc:
            raise LaplacianError(str(exc)) from None
        if self.p < 7:
            raise LaplacianError(f"prime must be >= 7, got {self.p}")
        vals = {str(k): int(v) for k, v in self.values.items()}
        bad = [k for k, v in vals.items() if not 0 <= v < self.p]
        if bad:
            raise LaplacianError(f"values outside [0, {self.p}) at {sorted(bad)}")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, v: str) -> int:
        return self.values[v]

    def covers(self, g: WeightedGraph) -> bool:
        return set(self.values) == set(g.vertices)

    def vector(self, g: WeightedGraph) -> list[int]:
        return [self.values[v] for v in g.vertices]

    def with_value(self, v: str, value: int) -> ModularLabeling:
        vals = dict(self.values)
        vals[v] = value % self.p
        return ModularLabeling(self.p, vals)


def _values(f: Any) -> tuple[Mapping[str, Any], int | None]:
    if isinstance(f, ModularLabeling):
        return f.values, f.p
    return f, None


def _lookup(values: Mapping[str, Any], v: str):
    try:
        return values[v]
    except KeyError:
        raise LaplacianError(f"labeling has no value at {v!r}") from None


def laplacian_unnormalized(g: WeightedGraph, f: Any, v: str):
    """sum over neighbors w of mu(vw) * (f(v) - f(w)); any abelian value group."""
    nbrs = g.weighted_neighbors(v)
    values, p = _values(f)
    fv = _lookup(values, v)
    total = fv - fv
    for w, mu in nbrs.items():
        total = total + mu * (fv - _lookup(values, w))
    return total % p if p is not None else total


def laplacian_normalized(g: WeightedGraph, f: Any, v: str):
    deg = weighted_degree(g, v)
    values, p = _values(f)
    raw = laplacian_unnormalized(g, f, v)
    if p is not None:
        if deg % p == 0:
            raise LaplacianError(f"weighted degree {deg} of {v!r} is not invertible mod {p}")
        return raw * pow(deg, -1, p) % p
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw) / deg
    if deg == 1:
        return raw
    raise LaplacianError(
        f"weighted degree {deg} of {v!r} is not invertible in {type(raw).__name__}")


def _require_unit_weights(g: WeightedGraph) -> None:
    if not g.is_unit_weight():
        raise LaplacianError("eigen-equation is only defined here for mu == 1")


def eigen_coefficients(eigenvalue: Fraction = EIGENVALUE) -> tuple[int, int]:
    """(neighbor coefficient, degree coefficient) of the cleared equation."""
    ev = Fraction(eigenvalue)
    return ev.denominator, ev.numerator - ev.denominator


def eigen_residual(g: WeightedGraph, lam: ModularLabeling, v: str,
                   eigenvalue: Fraction = EIGENVALUE) -> int:
    _require_unit_weights(g)
    c_nbr, c_deg = eigen_coefficients(eigenvalue)
    nbrs = g.neighbors(v)
    return (c_nbr * sum(lam[w] for w in nbrs) + c_deg * len(nbrs) * lam[v]) % lam.p


def eigen_residuals(g: WeightedGraph, lam: ModularLabeling) -> dict[str, int]:
    return {v: eigen_residual(g, lam, v) for v in g.vertices}


def is_eigenvector(g: WeightedGraph, lam: ModularLabeling) -> bool:
    if not lam.covers(g):
        raise LaplacianError("labeling is not total on the vertex set")
    return all(r == 0 for r in eigen_residuals(g, lam).values())


def eigen_matrix(g: WeightedGraph, eigenvalue: Fraction = EIGENVALUE) -> list[list[int]]:
    """Integer matrix of the cleared eigen-equation, rows/cols in vertex order."""
    _require_unit_weights(g)
    c_nbr, c_deg = eigen_coefficients(eigenvalue)
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(index)
    b = [[0] * n for _ in range(n)]
    for v, i in index.items():
        b[i][i] = c_deg * g.degree(v)
        for w in g.neighbors(v):
            b[i][index[w]] = c_nbr
    return b


def eigen_solutions_mod_p(g: WeightedGraph, p: int) -> list[ModularLabeling]:
    """Basis of the F_p eigen-space, as labelings."""
    if p < 7:
        raise LaplacianError(f"prime must be >= 7, got {p}")
    basis = nullspace_mod_p(eigen_matrix(g), p)
    return [ModularLabeling(p, dict(zip(g.vertices, vec))) for vec in basis]


def rational_triviality(g: WeightedGraph) -> bool:
    """True iff 5/3 is not an eigenvalue of the normalized Laplacian over Q."""
    return is_nonsingular(eigen_matrix(g))


def no_adjacent_degree3(g: WeightedGraph) -> bool:
    """No two degree-3 vertices adjacent (degrees must be at most 3)."""
    _require_unit_weights(g)
    degs = {v: g.degree(v) for v in g.vertices}
    over = sorted(v for v, d in degs.items() if d > 3)
    if over:
        raise LaplacianError(f"vertices of degree > 3: {over}")
    return not any(degs[u] == 3 and degs[v] == 3 for u, v in g.edges)

