"""Weighted simple graphs, their invariants, and the JSON graph file format."""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping

Edge = tuple[str, str]


class GraphError(ValueError):
    """Invalid graph data. ``code`` distinguishes the failure kind."""

    EMPTY = "empty"
    MALFORMED = "malformed"
    DUPLICATE_EDGE = "duplicate-edge"
    LOOP = "loop-edge"
    DISCONNECTED = "disconnected"
    ISOLATED = "isolated-vertex"
    UNKNOWN_VERTEX = "unknown-vertex"
    BAD_WEIGHT = "bad-weight"
    UNKNOWN_FIELD = "unknown-field"

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code


_DIGITS = re.compile(r"(\d+)")


def natural_key(vertex: str) -> tuple:
    """Sort key that orders ``"2" < "10"`` and ``"v2" < "v10"``."""
    return tuple((0, int(t), "") if t.isdigit() else (1, 0, t)
                 for t in _DIGITS.split(vertex) if t)


def edge_key(u: str, v: str) -> Edge:
    return (u, v) if natural_key(u) <= natural_key(v) else (v, u)


class WeightedGraph:
    """Immutable simple connected graph with positive integer edge weights.

    Vertex order is kept as given (it fixes matrix row order); equality and
    hashing ignore it.
    """

    __slots__ = ("_vertices", "_mu", "_distinguished", "_adj", "_hash")

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Edge] | Mapping[Edge, int],
        distinguished: Iterable[Edge] = (),
    ):
        verts = tuple(str(v) for v in vertices)
        if not verts:
            raise GraphError(GraphError.EMPTY, "graph has no vertices")
        if len(set(verts)) != len(verts):
            raise GraphError(GraphError.MALFORMED, "repeated vertex id")
        vset = set(verts)
        weighted = edges.items() if isinstance(edges, Mapping) else ((e, 1) for e in edges)
        mu: dict[Edge, int] = {}
        adj: dict[str, dict[str, int]] = {v: {} for v in verts}
        for (u, v), w in weighted:
            u, v = str(u), str(v)
            for x in (u, v):
                if x not in vset:
                    raise GraphError(GraphError.UNKNOWN_VERTEX, f"edge endpoint {x!r} is not a vertex")
            if u == v:
                raise GraphError(GraphError.LOOP, f"loop at {u!r}")
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise GraphError(GraphError.BAD_WEIGHT, f"edge {u}-{v} has weight {w!r}; need integer >= 1")
            key = edge_key(u, v)
            if key in mu:
                raise GraphError(GraphError.DUPLICATE_EDGE, f"duplicate edge {u}-{v}")
            mu[key] = w
            adj[u][v] = w
            adj[v][u] = w
        for v in verts:
            if not adj[v]:
                raise GraphError(GraphError.ISOLATED, f"vertex {v!r} has no edges")
        dist = set()
        for u, v in distinguished:
            key = edge_key(str(u), str(v))
            if key not in mu:
                raise GraphError(GraphError.UNKNOWN_VERTEX, f"distinguished edge {u}-{v} is not an edge")
            dist.add(key)
        self._vertices = verts
        self._mu = mu
        self._distinguished = frozenset(dist)
        self._adj = adj
        self._hash = None
        if len(_reachable(adj, verts[0])) != len(verts):
            raise GraphError(GraphError.DISCONNECTED, "graph is not connected")

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._mu)

    @property
    def mu(self) -> Mapping[Edge, int]:
        return dict(self._mu)

    @property
    def distinguished(self) -> frozenset[Edge]:
        return self._distinguished

    def weight(self, u: str, v: str) -> int:
        return self._mu[edge_key(u, v)]

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self._mu

    def neighbors(self, v: str) -> tuple[str, ...]:
        self._require(v)
        return tuple(self._adj[v])

    def weighted_neighbors(self, v: str) -> Mapping[str, int]:
        self._require(v)
        return self._adj[v]

    def degree(self, v: str) -> int:
        self._require(v)
        return len(self._adj[v])

    def is_unit_weight(self) -> bool:
        return all(w == 1 for w in self._mu.values())

    def _require(self, v: str) -> None:
        if v not in self._adj:
            raise GraphError(GraphError.UNKNOWN_VERTEX, f"unknown vertex {v!r}")

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._vertices)

    def _key(self):
        return (frozenset(self._vertices), frozenset(self._mu.items()), self._distinguished)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"WeightedGraph(|V|={len(self._vertices)}, |E|={len(self._mu)})"


def _reachable(adj: Mapping[str, Mapping[str, int]], start: str) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def weighted_degree(g: WeightedGraph, v: str) -> int:
    return sum(g.weighted_neighbors(v).values())


def first_betti(g: WeightedGraph) -> int:
    # the constructor enforces a single component
    return len(g.edges) - len(g.vertices) + 1


def bfs_distances(g: WeightedGraph, source: str, limit: int | None = None) -> dict[str, int]:
    """Unweighted hop distances from ``source``, optionally truncated at ``limit``."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance(g: WeightedGraph, v: str, w: str) -> int:
    g.neighbors(w)
    return bfs_distances(g, v)[w]


# --------------------------------------------------------------------------
# file format

GRAPH_TOP_FIELDS = {"prime", "vertices", "edges"}
VERTEX_FIELDS = {"id", "lambda"}
EDGE_FIELDS = {"u", "v", "mu", "distinguished"}


@dataclass
class GraphDocument:
    """Parsed graph file: the graph plus optional prime, vertex values and extras.

    ``labels`` maps vertex id to an int (F_p value) or a pair of Fractions
    (torus coordinates). ``vertex_extra`` and ``extra`` carry fields allowed
    by extended formats (decorations, block metadata).
    """

    graph: WeightedGraph
    prime: int | None = None
    labels: dict[str, Any] = field(default_factory=dict)
    vertex_extra: dict[str, dict[str, Any]] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)


def _parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise GraphError(GraphError.MALFORMED, f"bad rational {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
    raise GraphError(GraphError.MALFORMED, f"bad rational {s!r}")


def _parse_label(raw: Any, prime: int | None, vid: str):
    if isinstance(raw, list):
        if len(raw) != 2:
            raise GraphError(GraphError.MALFORMED, f"torus label of {vid!r} must have two coordinates")
        return tuple(_parse_rational(c) for c in raw)
    if isinstance(raw, int) and not isinstance(raw, bool):
        if prime is not None and not 0 <= raw < prime:
            raise GraphError(GraphError.MALFORMED, f"lambda of {vid!r} outside [0, {prime})")
        return raw
    raise GraphError(GraphError.MALFORMED, f"bad lambda for {vid!r}: {raw!r}")


def _check_fields(obj: Any, allowed: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise GraphError(GraphError.MALFORMED, f"{where} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise GraphError(GraphError.UNKNOWN_FIELD, f"unknown field(s) {sorted(unknown)} in {where}")


def parse_document(
    text: str,
    *,
    top_fields: set[str] = frozenset(),
    vertex_fields: set[str] = frozenset(),
) -> GraphDocument:
    """Parse the JSON graph format; extended formats pass their extra field names."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(GraphError.MALFORMED, f"invalid JSON: {exc}") from None
    _check_fields(data, GRAPH_TOP_FIELDS | set(top_fields), "document")
    if "vertices" not in data or "edges" not in data:
        raise GraphError(GraphError.MALFORMED, "document needs 'vertices' and 'edges'")
    prime = data.get("prime")
    if prime is not None and (not isinstance(prime, int) or isinstance(prime, bool) or prime < 2):
        raise GraphError(GraphError.MALFORMED, f"bad prime {prime!r}")
    if not isinstance(data["vertices"], list) or not isinstance(data["edges"], list):
        raise GraphError(GraphError.MALFORMED, "'vertices' and 'edges' must be arrays")

    ids: list[str] = []
    labels: dict[str, Any] = {}
    vertex_extra: dict[str, dict[str, Any]] = {}
    for raw in data["vertices"]:
        _check_fields(raw, VERTEX_FIELDS | set(vertex_fields), "vertex")
        if "id" not in raw or not isinstance(raw["id"], (str, int)) or isinstance(raw["id"], bool):
            raise GraphError(GraphError.MALFORMED, f"vertex without usable id: {raw!r}")
        vid = str(raw["id"])
        ids.append(vid)
        if "lambda" in raw:
            labels[vid] = _parse_label(raw["lambda"], prime, vid)
        extra = {k: raw[k] for k in raw if k not in VERTEX_FIELDS}
        if extra:
            vertex_extra[vid] = extra

    edges: dict[Edge, int] = {}
    distinguished: list[Edge] = []
    seen: set[Edge] = set()
    for raw in data["edges"]:
        _check_fields(raw, EDGE_FIELDS, "edge")
        if "u" not in raw or "v" not in raw:
            raise GraphError(GraphError.MALFORMED, f"edge without endpoints: {raw!r}")
        u, v = str(raw["u"]), str(raw["v"])
        if u == v:
            raise GraphError(GraphError.LOOP, f"loop at {u!r}")
        key = edge_key(u, v)
        if key in seen:
            raise GraphError(GraphError.DUPLICATE_EDGE, f"duplicate edge {u}-{v}")
        seen.add(key)
        edges[(u, v)] = raw.get("mu", 1)
        flag = raw.get("distinguished", False)
        if not isinstance(flag, bool):
            raise GraphError(GraphError.MALFORMED, f"'distinguished' must be boolean on {u}-{v}")
        if flag:
            distinguished.append((u, v))

    graph = WeightedGraph(ids, edges, distinguished)
    extra = {k: data[k] for k in data if k not in GRAPH_TOP_FIELDS}
    return GraphDocument(graph, prime, labels, vertex_extra, extra)


def parse_graph(text: str) -> WeightedGraph:
    return parse_document(text).graph


def _label_to_json(value: Any):
    if isinstance(value, tuple):
        return [str(Fraction(c)) for c in value]
    if hasattr(value, "x") and hasattr(value, "y"):
        return [str(value.x), str(value.y)]
    return int(value)


def document_to_dict(doc: GraphDocument) -> dict[str, Any]:
    g = doc.graph
    out: dict[str, Any] = {}
    if doc.prime is not None:
        out["prime"] = doc.prime
    verts = []
    for v in g.vertices:
        item: dict[str, Any] = {"id": v}
        if v in doc.labels:
            item["lambda"] = _label_to_json(doc.labels[v])
        item.update(doc.vertex_extra.get(v, {}))
        verts.append(item)
    out["vertices"] = verts
    edges = []
    for (u, v), w in g.mu.items():
        item = {"u": u, "v": v}
        if w != 1:
            item["mu"] = w
        if (u, v) in g.distinguished:
            item["distinguished"] = True
        edges.append(item)
    out["edges"] = edges
    out.update(doc.extra)
    return out


def serialize_document(doc: GraphDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2) + "\n"


def serialize_graph(g: WeightedGraph, prime: int | None = None,
                    labels: Mapping[str, Any] | None = None) -> str:
    return serialize_document(GraphDocument(g, prime, dict(labels or {})))
