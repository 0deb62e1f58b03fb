"""Building blocks: validation, cut-open H-blocks, insertion, and edge-count planning."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Iterable, Mapping, Sequence

from .graph_core import (
    Edge,
    GraphDocument,
    GraphError,
    WeightedGraph,
    bfs_distances,
    edge_key,
    first_betti,
    parse_document,
    serialize_document,
)
from .laplacian import (
    LaplacianError,
    ModularLabeling,
    eigen_coefficients,
    eigen_residuals,
    rational_triviality,
)

MAX_DEGREE = 3


class BlockError(ValueError):
    pass


class SurgeryError(BlockError):
    pass


@dataclass(frozen=True)
class BuildingBlock:
    """A labeled graph with a distinguished boundary edge (v, w) valued (a, b)."""

    graph: WeightedGraph
    labeling: ModularLabeling
    boundary_edge: Edge
    a: int
    b: int
    name: str = ""

    def __post_init__(self):
        v, w = self.boundary_edge
        if not self.graph.has_edge(v, w):
            raise BlockError(f"boundary edge {v}-{w} is not an edge")
        if not self.labeling.covers(self.graph):
            raise BlockError("labeling is not total on the vertex set")

    @property
    def p(self) -> int:
        return self.labeling.p

    @property
    def edge_count(self) -> int:
        return len(self.graph.edges)

    @property
    def betti(self) -> int:
        return first_betti(self.graph)


# --------------------------------------------------------------------------
# checks


def check_distance2_distinct(graph: WeightedGraph, lam: ModularLabeling) -> list[tuple[str, str]]:
    """Pairs at distance 1 or 2 carrying the same value."""
    bad = set()
    for v in graph.vertices:
        for w, dist in bfs_distances(graph, v, limit=2).items():
            if 1 <= dist and lam[v] == lam[w]:
                bad.add(edge_key(v, w))
    return sorted(bad)


def irreducibility_residual(lam: ModularLabeling, v: str, subset: Iterable[str]) -> int:
    """Cleared 5/3 residual at v inside an induced subgraph meeting N(v) in ``subset``."""
    c_nbr, c_deg = eigen_coefficients()
    s = list(subset)
    return (c_nbr * sum(lam[w] for w in s) + c_deg * len(s) * lam[v]) % lam.p


def check_strong_irreducibility(graph: WeightedGraph, lam: ModularLabeling
                                ) -> list[tuple[str, tuple[str, ...]]]:
    """Witnesses (v, S): S a proper nonempty subset of N(v) with vanishing residual.

    The residual at v in an induced subgraph H depends only on N(v) & V(H), so
    checking neighbor subsets covers every induced subgraph.
    """
    witnesses = []
    for v in graph.vertices:
        nbrs = graph.neighbors(v)
        if len(nbrs) > MAX_DEGREE:
            raise BlockError(f"vertex {v!r} has degree {len(nbrs)} > {MAX_DEGREE}")
        for k in range(1, len(nbrs)):
            for s in itertools.combinations(nbrs, k):
                if irreducibility_residual(lam, v, s) == 0:
                    witnesses.append((v, s))
    return witnesses


@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: list[Any] = field(default_factory=list)
    advisory: bool = False
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.name, "passed": self.passed}
        if self.advisory:
            out["advisory"] = True
        if self.detail:
            out["detail"] = self.detail
        if self.witnesses:
            out["witnesses"] = [_jsonable(w) for w in self.witnesses]
        return out


def _jsonable(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


@dataclass
class BlockReport:
    name: str
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.advisory)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.advisory]

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def labeled_graph_checks(graph: WeightedGraph, lam: ModularLabeling,
                         rational: bool = True) -> list[CheckResult]:
    """Degree cap, eigenvector, rational triviality, degree-3 adjacency,
    distance-2 distinctness and strong irreducibility."""
    checks = []
    unit = graph.is_unit_weight()
    checks.append(CheckResult("unit_weights", unit,
                              [] if unit else [e for e, w in graph.mu.items() if w != 1]))
    if not unit:
        return checks
    over = [v for v in graph.vertices if graph.degree(v) > MAX_DEGREE]
    checks.append(CheckResult("degree_at_most_3", not over, over))
    residuals = eigen_residuals(graph, lam)
    bad_rows = [(v, r) for v, r in residuals.items() if r]
    checks.append(CheckResult("eigenvector", not bad_rows, bad_rows,
                              detail="3*sum(nbr values) + 2*deg*value == 0 mod p"))
    if rational:
        checks.append(CheckResult("rational_triviality", rational_triviality(graph)))
    if not over:
        adj33 = [e for e in graph.edges if graph.degree(e[0]) == 3 and graph.degree(e[1]) == 3]
        checks.append(CheckResult("no_adjacent_degree3", not adj33, adj33, advisory=True))
    dup = check_distance2_distinct(graph, lam)
    checks.append(CheckResult("distance2_distinct", not dup, dup))
    if not over:
        wit = check_strong_irreducibility(graph, lam)
        checks.append(CheckResult("strong_irreducibility", not wit, wit))
    return checks


def boundary_check(blk: BuildingBlock) -> CheckResult:
    v, w = blk.boundary_edge
    problems = []
    for x in (v, w):
        if blk.graph.degree(x) != 2:
            problems.append((x, f"degree {blk.graph.degree(x)}"))
    if blk.labeling[v] != blk.a:
        problems.append((v, f"value {blk.labeling[v]} != a = {blk.a}"))
    if blk.labeling[w] != blk.b:
        problems.append((w, f"value {blk.labeling[w]} != b = {blk.b}"))
    return CheckResult("boundary_edge", not problems, problems)


def validate_block(blk: BuildingBlock, rational: bool = True) -> BlockReport:
    checks = labeled_graph_checks(blk.graph, blk.labeling, rational=rational)
    checks.append(boundary_check(blk))
    return BlockReport(blk.name or "block", checks)


# --------------------------------------------------------------------------
# surgery


@dataclass(frozen=True)
class OpenBlock:
    """A block cut open along its boundary edge: a graph that begins with the
    edge (v, w) and ends with a copy (v2, w2), where v and w2 are leaves."""

    graph: WeightedGraph
    labeling: ModularLabeling
    start: Edge  # (v, w): v is the a-end leaf
    end: Edge    # (v2, w2): w2 is the b-end leaf
    a: int
    b: int
    source: BuildingBlock

    @property
    def edge_count(self) -> int:
        return len(self.graph.edges)

    @property
    def betti(self) -> int:
        return first_betti(self.graph)


def _fresh(name: str, taken: set[str]) -> str:
    cand = name + "'"
    while cand in taken:
        cand += "'"
    return cand


def make_h(blk: BuildingBlock) -> OpenBlock:
    """Cut ``blk`` open at its boundary edge (v, w).

    v and w are copied to v2, w2; the edge from v to its other neighbor x moves
    to v2 and a new edge v2-w2 is added. The result runs v, w, ..., x, v2, w2,
    with one more edge and one less independent cycle.
    """
    g = blk.graph
    v, w = blk.boundary_edge
    if blk.labeling[v] != blk.a or blk.labeling[w] != blk.b:
        raise SurgeryError("boundary values do not match (a, b)")
    for x in (v, w):
        if g.degree(x) != 2:
            raise SurgeryError(f"boundary vertex {x!r} has degree {g.degree(x)}, need 2")
    (x,) = [u for u in g.neighbors(v) if u != w]
    taken = set(g.vertices)
    v2 = _fresh(v, taken)
    taken.add(v2)
    w2 = _fresh(w, taken)
    edges = [e for e in g.edges if e != edge_key(v, x)]
    edges += [(x, v2), (v2, w2)]
    try:
        h = WeightedGraph(list(g.vertices) + [v2, w2], edges, [(v, w), (v2, w2)])
    except GraphError as exc:
        if exc.code == GraphError.DISCONNECTED:
            raise SurgeryError(f"boundary edge {v}-{w} does not lie on a cycle") from None
        raise
    vals = dict(blk.labeling.values)
    vals[v2], vals[w2] = blk.a, blk.b
    return OpenBlock(h, ModularLabeling(blk.p, vals), (v, w), (v2, w2), blk.a, blk.b, blk)


def close_h(h: OpenBlock, name: str = "") -> BuildingBlock:
    """Glue the two boundary copies of an open block back together."""
    v, w = h.start
    v2, w2 = h.end
    rename = {v2: v, w2: w}
    edges = set()
    for a, b in h.graph.edges:
        e = edge_key(rename.get(a, a), rename.get(b, b))
        edges.add(e)
    verts = [x for x in h.graph.vertices if x not in rename]
    g = WeightedGraph(verts, sorted(edges), [(v, w)])
    vals = {x: h.labeling[x] for x in verts}
    return BuildingBlock(g, ModularLabeling(h.labeling.p, vals), (v, w), h.a, h.b, name)


def _prefix_for(host: WeightedGraph) -> str:
    heads = {x.split("/", 1)[0] for x in host.vertices if "/" in x}
    k = 1
    while f"i{k}" in heads:
        k += 1
    return f"i{k}"


def insert(host: BuildingBlock, site: Edge, h: OpenBlock, prefix: str | None = None,
           verify: bool = True) -> BuildingBlock:
    """Splice ``h`` into ``host`` at the edge ``site``.

    The site edge (s_a, s_b) is removed, s_a is identified with the a-end leaf
    of ``h`` and s_b with its b-end leaf. Edges grow by |E(h)| - 1 and the
    first Betti number by that of ``h``.
    """
    g = host.graph
    lam = host.labeling
    if lam.p != h.labeling.p:
        raise SurgeryError(f"prime mismatch: host {lam.p}, insert {h.labeling.p}")
    s, t = site
    if not g.has_edge(s, t):
        raise SurgeryError(f"site {s}-{t} is not an edge of the host")
    if (lam[s], lam[t]) == (h.a, h.b):
        s_a, s_b = s, t
    elif (lam[t], lam[s]) == (h.a, h.b):
        s_a, s_b = t, s
    else:
        raise SurgeryError(f"site values ({lam[s]}, {lam[t]}) do not match ({h.a}, {h.b})")
    for x in (s_a, s_b):
        if g.degree(x) != 2:
            raise SurgeryError(f"site vertex {x!r} has degree {g.degree(x)}, need 2")

    prefix = prefix or _prefix_for(g)
    v, w = h.start
    v2, w2 = h.end
    rename = {x: f"{prefix}/{x}" for x in h.graph.vertices}
    rename[v], rename[w2] = s_a, s_b
    clash = {rename[x] for x in h.graph.vertices if x not in (v, w2)} & set(g.vertices)
    if clash:
        raise SurgeryError(f"vertex ids clash: {sorted(clash)}")

    site_key = edge_key(s_a, s_b)
    verts = list(g.vertices) + [rename[x] for x in h.graph.vertices if x not in (v, w2)]
    edges = [e for e in g.edges if e != site_key]
    edges += [(rename[a], rename[b]) for a, b in h.graph.edges]
    dist = [e for e in g.distinguished if e != site_key]
    dist += [(s_a, rename[w]), (rename[v2], s_b)]
    new_graph = WeightedGraph(verts, edges, dist)

    vals = dict(lam.values)
    for x in h.graph.vertices:
        vals[rename[x]] = h.labeling[x]
    boundary = host.boundary_edge
    if edge_key(*boundary) == site_key:
        boundary = (s_a, rename[w]) if host.boundary_edge[0] == s_a else (rename[w], s_a)
    out = BuildingBlock(new_graph, ModularLabeling(lam.p, vals), boundary, host.a, host.b,
                        f"{host.name}+{h.source.name}" if host.name else "")
    if verify:
        failed = [c for c in labeled_graph_checks(out.graph, out.labeling, rational=False)
                  if not c.passed]
        if failed:
            raise SurgeryError(
                "post-insertion check failed: " + ", ".join(
                    f"{c.name} {c.witnesses[:3]}" for c in failed))
    return out


# --------------------------------------------------------------------------
# planning


@dataclass(frozen=True)
class PlanStep:
    site: Edge
    block: str
    prefix: str

    def to_dict(self) -> dict[str, Any]:
        return {"site": list(self.site), "block": self.block, "prefix": self.prefix}


@dataclass(frozen=True)
class ConstructionPlan:
    base: str
    steps: tuple[PlanStep, ...]
    degree: int
    genus: int

    def to_dict(self) -> dict[str, Any]:
        return {"base": self.base, "degree": self.degree, "genus": self.genus,
                "steps": [s.to_dict() for s in self.steps]}


def represent(n: int, coins: Sequence[int]) -> tuple[int, ...] | None:
    """Non-negative multiplicities with sum(c*k) == n using the fewest coins."""
    if n < 0:
        return None
    best: list[tuple[int, ...] | None] = [None] * (n + 1)
    best[0] = (0,) * len(coins)
    for total in range(1, n + 1):
        cand = None
        for i, c in enumerate(coins):
            if c <= total and best[total - c] is not None:
                prev = best[total - c]
                combo = prev[:i] + (prev[i] + 1,) + prev[i + 1:]
                if cand is None or (sum(combo), combo[::-1]) < (sum(cand), cand[::-1]):
                    cand = combo
        best[total] = cand
    return best[n]


def frobenius_number(a: int, b: int) -> int:
    if gcd(a, b) != 1:
        raise ValueError("denominations must be coprime")
    return a * b - a - b


def plan(d: int, g: int, blocks: Mapping[str, BuildingBlock]) -> ConstructionPlan | None:
    """Blocks to glue for a graph with ``d`` edges and first Betti number ``g``.

    ``blocks`` maps names to closed blocks sharing (a, b) and p. Blocks with
    Betti number 1 change the edge count only; each insertion of a block with
    Betti number 2 adds one cycle. Returns None when no combination fits.
    """
    if g < 1:
        raise BlockError(f"genus must be >= 1, got {g}")
    if d < 1:
        raise BlockError(f"degree must be >= 1, got {d}")
    _require_uniform(blocks.values())
    unit = sorted((n for n, b in blocks.items() if b.betti == 1),
                  key=lambda n: (blocks[n].edge_count, n))
    double = sorted((n for n, b in blocks.items() if b.betti == 2),
                    key=lambda n: (blocks[n].edge_count, n))
    n_double = g - 1
    if n_double and not double:
        return None
    dn = double[0] if double else None
    rest = d - (n_double * blocks[dn].edge_count if n_double else 0)
    counts = represent(rest, [blocks[n].edge_count for n in unit])
    if counts is None:
        return None
    pieces: list[str] = []
    for name, k in zip(unit, counts):
        pieces += [name] * k
    pieces += [dn] * n_double
    if not pieces:
        return None
    base = pieces.pop(0)
    steps = []
    boundary = blocks[base].boundary_edge
    for i, name in enumerate(pieces, start=1):
        prefix = f"s{i}"
        steps.append(PlanStep(boundary, name, prefix))
        v_start = blocks[name].boundary_edge[1]
        boundary = (boundary[0], f"{prefix}/{v_start}")
    return ConstructionPlan(base, tuple(steps), d, g)


def replay(p: ConstructionPlan, blocks: Mapping[str, BuildingBlock], verify: bool = True) -> BuildingBlock:
    current = blocks[p.base]
    opened = {}
    for step in p.steps:
        if step.block not in opened:
            opened[step.block] = make_h(blocks[step.block])
        current = insert(current, step.site, opened[step.block], step.prefix, verify=verify)
    return current


def _require_uniform(blocks: Iterable[BuildingBlock]) -> None:
    blocks = list(blocks)
    if len({(b.p, b.a, b.b) for b in blocks}) > 1:
        raise BlockError("blocks must share the prime and the boundary values (a, b)")


# --------------------------------------------------------------------------
# file format

_BLOCK_FIELDS = {"boundary_edge", "a", "b"}


def block_from_document(doc: GraphDocument, name: str = "") -> BuildingBlock:
    if doc.prime is None:
        raise GraphError(GraphError.MALFORMED, "block file needs 'prime'")
    missing = set(doc.graph.vertices) - set(doc.labels)
    if missing:
        raise GraphError(GraphError.MALFORMED, f"vertices without lambda: {sorted(missing)}")
    if any(not isinstance(x, int) for x in doc.labels.values()):
        raise GraphError(GraphError.MALFORMED, "block labels must be F_p integers")
    edge = doc.extra.get("boundary_edge")
    if not (isinstance(edge, list) and len(edge) == 2):
        raise GraphError(GraphError.MALFORMED, "block file needs 'boundary_edge': [v, w]")
    for key in ("a", "b"):
        if not isinstance(doc.extra.get(key), int):
            raise GraphError(GraphError.MALFORMED, f"block file needs integer {key!r}")
    try:
        lam = ModularLabeling(doc.prime, doc.labels)
        return BuildingBlock(doc.graph, lam, (str(edge[0]), str(edge[1])),
                             doc.extra["a"], doc.extra["b"], name)
    except (LaplacianError, BlockError) as exc:
        raise GraphError(GraphError.MALFORMED, str(exc)) from None


def parse_block(text: str, name: str = "") -> BuildingBlock:
    return block_from_document(parse_document(text, top_fields=_BLOCK_FIELDS), name)


def labeled_document(graph: WeightedGraph, lam: ModularLabeling) -> GraphDocument:
    return GraphDocument(graph, lam.p, dict(lam.values))


def parse_labeled(text: str) -> tuple[WeightedGraph, ModularLabeling]:
    """Graph file with a prime and integer lambda on every vertex; block fields allowed."""
    doc = parse_document(text, top_fields=_BLOCK_FIELDS)
    if doc.prime is None:
        raise GraphError(GraphError.MALFORMED, "labeled graph needs 'prime'")
    missing = set(doc.graph.vertices) - set(doc.labels)
    if missing:
        raise GraphError(GraphError.MALFORMED, f"vertices without lambda: {sorted(missing)}")
    try:
        return doc.graph, ModularLabeling(doc.prime, doc.labels)
    except LaplacianError as exc:
        raise GraphError(GraphError.MALFORMED, str(exc)) from None


def serialize_block(blk: BuildingBlock) -> str:
    extra = {"boundary_edge": list(blk.boundary_edge), "a": blk.a, "b": blk.b}
    return serialize_document(GraphDocument(blk.graph, blk.p, dict(blk.labeling.values), {}, extra))


def serialize_open_block(h: OpenBlock) -> str:
    extra = {"boundary_edge": list(h.start), "a": h.a, "b": h.b}
    return serialize_document(GraphDocument(h.graph, h.labeling.p, dict(h.labeling.values), {}, extra))


def serialize_plan(p: ConstructionPlan) -> str:
    return json.dumps(p.to_dict(), indent=2) + "\n"
