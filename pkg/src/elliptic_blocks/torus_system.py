"""Red/green decorated graphs and their linear system on torus-valued labelings.

Each red vertex v carries (k_f, k_inf) with deg_mu(v) = 2 k_f + k_inf and imposes

    sum_w mu(vw) lambda(w) = (k_f - 2 k_inf) lambda(v).

Each green vertex carries k_l = deg_mu(v) and either imposes

    3 sum_w mu(vw) lambda(w) = k_l lambda(v)

or sits at one of 25 special points p_1..p_25 (the SPECIAL branch), which pins
its value and exempts it from the equation.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .exact_algebra import KernelSize, TorusPoint, rank_over_rationals, torus_kernel
from .graph_core import (
    GraphDocument,
    GraphError,
    WeightedGraph,
    edge_key,
    parse_document,
    serialize_document,
    weighted_degree,
)

N_SPECIAL_POINTS = 25
EQUATION = "equation"
SPECIAL = "special"  # symbolic: any of the 25 points, used by branch enumeration
DEFAULT_BRANCH_CAP = 2**16


class Color(str, enum.Enum):
    RED = "red"
    GREEN = "green"


class DecorationError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    vertex: str
    message: str

    def __str__(self) -> str:
        return f"{self.vertex}: {self.message}"


@dataclass(frozen=True)
class DecoratedBipartiteGraph:
    graph: WeightedGraph
    color: Mapping[str, Color]
    k_f: Mapping[str, int] = field(default_factory=dict)
    k_inf: Mapping[str, int] = field(default_factory=dict)
    k_l: Mapping[str, int] = field(default_factory=dict)

    @property
    def reds(self) -> list[str]:
        return [v for v in self.graph.vertices if self.color.get(v) == Color.RED]

    @property
    def greens(self) -> list[str]:
        return [v for v in self.graph.vertices if self.color.get(v) == Color.GREEN]

    def degree_functional(self, coeffs: tuple[int, int, int]) -> int:
        """Caller-chosen linear functional a*sum k_f + b*sum k_inf + c*sum k_l."""
        a, b, c = coeffs
        return (a * sum(self.k_f.get(v, 0) for v in self.reds)
                + b * sum(self.k_inf.get(v, 0) for v in self.reds)
                + c * sum(self.k_l.get(v, 0) for v in self.greens))


def validate_decorations(d: DecoratedBipartiteGraph) -> list[Violation]:
    """Every broken coloring or weight constraint; an empty list means valid."""
    out: list[Violation] = []
    g = d.graph
    for v in g.vertices:
        c = d.color.get(v)
        if c not in (Color.RED, Color.GREEN):
            out.append(Violation(v, "missing color"))
            continue
        deg = weighted_degree(g, v)
        if c == Color.RED:
            kf, ki = d.k_f.get(v), d.k_inf.get(v)
            if kf is None or ki is None or kf < 0 or ki < 0:
                out.append(Violation(v, "red vertex needs non-negative k_f and k_inf"))
            elif deg != 2 * kf + ki:
                out.append(Violation(v, f"weighted degree {deg} != 2*k_f + k_inf = {2 * kf + ki}"))
        else:
            kl = d.k_l.get(v)
            if kl is None or kl < 0:
                out.append(Violation(v, "green vertex needs non-negative k_l"))
            elif deg != kl:
                out.append(Violation(v, f"weighted degree {deg} != k_l = {kl}"))
    for u, w in g.edges:
        if d.color.get(u) == d.color.get(w) and d.color.get(u) is not None:
            out.append(Violation(u, f"edge {u}-{w} joins two {d.color[u].value} vertices"))
    return out


def _require_valid(d: DecoratedBipartiteGraph) -> None:
    bad = validate_decorations(d)
    if bad:
        raise DecorationError("; ".join(map(str, bad)))


# --------------------------------------------------------------------------
# branches and the system matrix

Branch = Mapping[str, Any]  # green vertex -> EQUATION | SPECIAL | int 1..25


def _is_special(choice: Any) -> bool:
    return choice == SPECIAL or (isinstance(choice, int) and not isinstance(choice, bool))


def normalize_branch(d: DecoratedBipartiteGraph, b: Branch | None) -> dict[str, Any]:
    b = dict(b or {})
    greens = d.greens
    unknown = set(b) - set(greens)
    if unknown:
        raise DecorationError(f"branch assigns non-green vertices {sorted(unknown)}")
    out = {}
    for v in greens:
        choice = b.get(v, EQUATION)
        if choice not in (EQUATION, SPECIAL):
            if (not isinstance(choice, int) or isinstance(choice, bool)
                    or not 1 <= choice <= N_SPECIAL_POINTS):
                raise DecorationError(f"bad branch choice {choice!r} at {v!r}")
        out[v] = choice
    return out


@dataclass(frozen=True)
class TorusSystem:
    """Coefficient matrix over the free vertices plus the symbolic right-hand side.

    ``rhs[i]`` maps a special-point label (its index, or the pinned vertex id
    for symbolic SPECIAL) to the integer coefficient of that point on the right
    of row ``i``.
    """

    variables: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    pinned: Mapping[str, Any]
    rhs: tuple[Mapping[str, int], ...]


def _full_rows(d: DecoratedBipartiteGraph) -> dict[str, dict[str, int]]:
    g = d.graph
    rows: dict[str, dict[str, int]] = {}
    for v in g.vertices:
        deg = weighted_degree(g, v)
        nbrs = g.weighted_neighbors(v)
        if d.color[v] == Color.RED:
            kf, ki = d.k_f[v], d.k_inf[v]
            row = {v: kf - 2 * ki}
            row.update({w: -mu for w, mu in nbrs.items()})
            # Laplacian form: Delta lambda(v) = (3 deg - 5 k_f) lambda(v)
            alt = {v: 5 * kf - 2 * deg}
            alt.update({w: -mu for w, mu in nbrs.items()})
        else:
            kl = d.k_l[v]
            row = {v: kl}
            row.update({w: -3 * mu for w, mu in nbrs.items()})
            # Laplacian form: 3 Delta lambda(v) = 2 deg lambda(v)
            alt = {v: deg}
            alt.update({w: -3 * mu for w, mu in nbrs.items()})
        if row != alt:
            raise AssertionError(f"row forms disagree at {v!r}: {row} vs {alt}")
        rows[v] = row
    return rows


def build_system(d: DecoratedBipartiteGraph, b: Branch | None = None) -> TorusSystem:
    _require_valid(d)
    branch = normalize_branch(d, b)
    pinned = {v: c for v, c in branch.items() if _is_special(c)}
    variables = tuple(v for v in d.graph.vertices if v not in pinned)
    rows = _full_rows(d)
    matrix, rhs = [], []
    for v in variables:
        row = rows[v]
        matrix.append(tuple(row.get(x, 0) for x in variables))
        shift: dict[str, int] = {}
        for x, coeff in row.items():
            if x in pinned:
                label = f"p{pinned[x]}" if pinned[x] != SPECIAL else f"p[{x}]"
                shift[label] = shift.get(label, 0) - coeff
        rhs.append(shift)
    return TorusSystem(variables, tuple(matrix), pinned, tuple(rhs))


@dataclass(frozen=True)
class BranchReport:
    branch: Mapping[str, Any]
    n_variables: int
    rank: int
    size: KernelSize
    per_choice_of_special_points: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "branch": {v: (c if isinstance(c, int) else str(c)) for v, c in self.branch.items()},
            "variables": self.n_variables,
            "rank": self.rank,
            "kind": self.size.kind,
            ("count" if self.size.finite else "dimension"): self.size.value,
            "per_choice_of_special_points": self.per_choice_of_special_points,
        }


def analyze_branch(d: DecoratedBipartiteGraph, b: Branch | None = None,
                   torus_dim: int = 2) -> BranchReport:
    system = build_system(d, b)
    m = [list(r) for r in system.matrix]
    size = torus_kernel(m, torus_dim)
    rank = rank_over_rationals(m) if m else 0
    branch = normalize_branch(d, b)
    return BranchReport(branch, len(system.variables), rank, size, bool(system.pinned))


def finiteness(
    d: DecoratedBipartiteGraph,
    branches: Sequence[Branch] | None = None,
    cap: int = DEFAULT_BRANCH_CAP,
    torus_dim: int = 2,
) -> list[BranchReport]:
    """Per-branch solution-set size of the torus system.

    Without explicit ``branches`` every green vertex is tried on the equation
    and on a symbolic special point. The index of a special point only moves
    the right-hand side, so one symbolic choice stands for all 25.
    """
    _require_valid(d)
    greens = d.greens
    if not greens:
        raise DecorationError("decorated graph has no green vertices")
    if branches is None:
        if 2 ** len(greens) > cap:
            raise DecorationError(
                f"{2 ** len(greens)} branch assignments exceed the cap {cap}; pass explicit branches")
        branches = [dict(zip(greens, combo))
                    for combo in itertools.product((EQUATION, SPECIAL), repeat=len(greens))]
    reports = [analyze_branch(d, b, torus_dim) for b in branches]
    return sorted(reports, key=lambda r: tuple(_branch_sort_key(r.branch[v]) for v in greens))


def _branch_sort_key(choice: Any) -> tuple[int, int]:
    if choice == EQUATION:
        return (0, 0)
    if choice == SPECIAL:
        return (1, 0)
    return (2, choice)


# --------------------------------------------------------------------------
# evaluation on concrete torus labelings


def check_torus_solution(
    d: DecoratedBipartiteGraph,
    b: Branch | None,
    lam: Mapping[str, TorusPoint],
    specials: Mapping[int, TorusPoint] | None = None,
) -> dict[str, TorusPoint]:
    """Residual of every row at ``lam``; all zero iff ``lam`` solves the system."""
    _require_valid(d)
    branch = normalize_branch(d, b)
    specials = dict(specials or {})
    missing = [v for v in d.graph.vertices if v not in lam]
    if missing:
        raise DecorationError(f"labeling misses vertices {missing}")
    rows = _full_rows(d)
    out = {}
    for v in d.graph.vertices:
        choice = branch.get(v, EQUATION)
        if _is_special(choice):
            if choice == SPECIAL or choice not in specials:
                raise DecorationError(f"no concrete position for special point {choice!r} at {v!r}")
            out[v] = lam[v] - specials[choice]
            continue
        acc = TorusPoint(0, 0)
        for x, coeff in rows[v].items():
            acc = acc + coeff * lam[x]
        out[v] = acc
    return out


# --------------------------------------------------------------------------
# the reduction to the green graph


def reduce_to_gprime(d: DecoratedBipartiteGraph) -> WeightedGraph:
    """Suppress the degree-2 red vertices, joining their green neighbors directly.

    Needs every red to have k_f = 1, k_inf = 0 and unit weights. Then a red v
    with green neighbors w1, w2 forces lambda(v) = lambda(w1) + lambda(w2), and
    the green rows become the 5/3 eigen-equation on the reduced graph.
    """
    _require_valid(d)
    g = d.graph
    problems = []
    for v in d.reds:
        nbrs = g.weighted_neighbors(v)
        if d.k_f[v] != 1 or d.k_inf[v] != 0:
            problems.append(f"{v}: needs k_f=1, k_inf=0")
        if any(mu != 1 for mu in nbrs.values()):
            problems.append(f"{v}: needs unit edge weights")
        if len(nbrs) != 2:
            problems.append(f"{v}: degree {len(nbrs)} != 2")
    if problems:
        raise DecorationError("; ".join(problems))
    edges = []
    seen = set()
    for v in d.reds:
        w1, w2 = g.neighbors(v)
        key = edge_key(w1, w2)
        if key in seen:
            raise DecorationError(f"two red vertices join {w1} and {w2}; reduced graph not simple")
        seen.add(key)
        edges.append(key)
    return WeightedGraph(d.greens, edges)


def red_id(u: str, w: str) -> str:
    a, b = edge_key(u, w)
    return f"{a}~{b}"


def expand_from_gprime(gp: WeightedGraph) -> DecoratedBipartiteGraph:
    """Inverse of :func:`reduce_to_gprime`: subdivide each edge by a line-class red vertex."""
    if not gp.is_unit_weight():
        raise DecorationError("reduced graph must have unit weights")
    verts = list(gp.vertices)
    edges = []
    color = {v: Color.GREEN for v in verts}
    k_f, k_inf = {}, {}
    for u, w in gp.edges:
        r = red_id(u, w)
        verts.append(r)
        color[r] = Color.RED
        k_f[r], k_inf[r] = 1, 0
        edges += [(u, r), (r, w)]
    g = WeightedGraph(verts, edges)
    k_l = {v: gp.degree(v) for v in gp.vertices}
    return DecoratedBipartiteGraph(g, color, k_f, k_inf, k_l)


def lift_labeling(d: DecoratedBipartiteGraph, green_values: Mapping[str, Any]) -> dict[str, Any]:
    """Extend a green labeling by lambda(red) = sum of its two green neighbors."""
    out = {v: green_values[v] for v in d.greens}
    for v in d.reds:
        w1, w2 = d.graph.neighbors(v)
        out[v] = green_values[w1] + green_values[w2]
    return out


# --------------------------------------------------------------------------
# file format

_DECOR_FIELDS = {"color", "k_f", "k_inf", "k_l"}


def decorated_from_document(doc: GraphDocument) -> DecoratedBipartiteGraph:
    color, k_f, k_inf, k_l = {}, {}, {}, {}
    for v in doc.graph.vertices:
        extra = doc.vertex_extra.get(v, {})
        c = extra.get("color")
        try:
            color[v] = Color(c)
        except ValueError:
            raise GraphError(GraphError.MALFORMED, f"vertex {v!r} has bad color {c!r}") from None
        for name, target in (("k_f", k_f), ("k_inf", k_inf), ("k_l", k_l)):
            if name in extra:
                val = extra[name]
                if not isinstance(val, int) or isinstance(val, bool):
                    raise GraphError(GraphError.MALFORMED, f"{name} of {v!r} must be an integer")
                target[v] = val
    return DecoratedBipartiteGraph(doc.graph, color, k_f, k_inf, k_l)


def parse_decorated(text: str) -> DecoratedBipartiteGraph:
    return decorated_from_document(parse_document(text, vertex_fields=_DECOR_FIELDS))


def serialize_decorated(d: DecoratedBipartiteGraph, labels: Mapping[str, Any] | None = None) -> str:
    extra = {}
    for v in d.graph.vertices:
        item: dict[str, Any] = {"color": d.color[v].value}
        if d.color[v] == Color.RED:
            item["k_f"], item["k_inf"] = d.k_f[v], d.k_inf[v]
        else:
            item["k_l"] = d.k_l[v]
        extra[v] = item
    return serialize_document(GraphDocument(d.graph, None, dict(labels or {}), extra))


def parse_branches(text: str) -> list[dict[str, Any]]:
    """A branch file holds one ``{vertex: "equation" | 1..25}`` map or a list of them."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(GraphError.MALFORMED, f"invalid JSON: {exc}") from None
    items = data if isinstance(data, list) else [data]
    out = []
    for item in items:
        if not isinstance(item, dict):
            raise GraphError(GraphError.MALFORMED, "branch assignment must be an object")
        for v, c in item.items():
            ok = c == EQUATION or (isinstance(c, int) and not isinstance(c, bool)
                                   and 1 <= c <= N_SPECIAL_POINTS)
            if not ok:
                raise GraphError(GraphError.MALFORMED, f"bad branch choice {c!r} at {v!r}")
        out.append(dict(item))
    return out


def torus_labels(labels: Mapping[str, Any]) -> dict[str, TorusPoint]:
    out = {}
    for v, val in labels.items():
        if not isinstance(val, tuple):
            raise GraphError(GraphError.MALFORMED, f"vertex {v!r} needs a torus label [x, y]")
        out[v] = TorusPoint(Fraction(val[0]), Fraction(val[1]))
    return out
