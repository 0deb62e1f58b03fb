"""Search for new building blocks over F_p.

Cycles have a closed form: lambda(i) = r**i is a 5/3 eigenvector on an
m-cycle iff 3r^2 + 4r + 3 = 0 and r**m = 1. Other graphs (max degree 3) are
enumerated up to isomorphism and their F_p eigen-spaces scanned.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from typing import Iterator

from .blocks import BuildingBlock, validate_block
from .exact_algebra import nullspace_mod_p
from .graph_core import WeightedGraph, edge_key
from .laplacian import LaplacianError, ModularLabeling, eigen_matrix


@dataclass(frozen=True)
class SearchConstraints:
    cycles_only: bool = False
    min_betti: int = 1
    boundary_values: tuple[int, int] | None = None
    max_results: int = 50
    random_samples: int = 200  # random graphs beyond the exhaustive range
    max_eigenspace_dim: int = 2


def multiplicative_order(r: int, p: int) -> int:
    if r % p == 0:
        raise ValueError("0 has no multiplicative order")
    k, x = 1, r % p
    while x != 1:
        x = x * r % p
        k += 1
    return k


def cycle_ratios(p: int) -> list[int]:
    """Roots of 3r^2 + 4r + 3 in F_p."""
    return [r for r in range(1, p) if (3 * r * r + 4 * r + 3) % p == 0]


def cycle_block(m: int, r: int, p: int, scale: int = 1) -> BuildingBlock:
    verts = [str(i) for i in range(m)]
    g = WeightedGraph(verts, [(str(i), str((i + 1) % m)) for i in range(m)], [("0", "1")])
    lam = ModularLabeling(p, {str(i): scale * pow(r, i, p) % p for i in range(m)})
    return BuildingBlock(g, lam, ("0", "1"), lam["0"], lam["1"], f"C{m}[r={r}]")


def search_cycles(p: int, max_vertices: int, constraints: SearchConstraints) -> list[BuildingBlock]:
    found = []
    roots = cycle_ratios(p)
    # r and 1/r give the same cycle read backwards
    reps = sorted({min(r, pow(r, -1, p)) for r in roots})
    for r in reps:
        order = multiplicative_order(r, p)
        for m in range(max(3, order), max_vertices + 1):
            if m % order:
                continue
            blk = cycle_block(m, r, p)
            if constraints.boundary_values is not None:
                blk = _rescale_to_boundary(blk, constraints.boundary_values)
                if blk is None:
                    continue
            if validate_block(blk).ok:
                found.append(blk)
    return found


def _rescale_to_boundary(blk: BuildingBlock, ab: tuple[int, int]) -> BuildingBlock | None:
    v, w = blk.boundary_edge
    p = blk.p
    if blk.labeling[v] == 0:
        return None
    c = ab[0] * pow(blk.labeling[v], -1, p) % p
    vals = {x: c * y % p for x, y in blk.labeling.values.items()}
    if vals[w] != ab[1] % p:
        return None
    return BuildingBlock(blk.graph, ModularLabeling(p, vals), (v, w), vals[v], vals[w], blk.name)


def _atlas_graphs(max_vertices: int) -> Iterator[tuple[int, list[tuple[int, int]]]]:
    import networkx as nx

    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n < 3 or n > max_vertices:
            continue
        if h.number_of_edges() < n or not nx.is_connected(h):
            continue
        if max(d for _, d in h.degree()) > 3:
            continue
        yield n, sorted(tuple(sorted(e)) for e in h.edges())


def _random_graphs(lo: int, hi: int, samples: int, rng: random.Random
                   ) -> Iterator[tuple[int, list[tuple[int, int]]]]:
    """Random subcubic graphs, skipping any isomorphic to one already yielded."""
    import networkx as nx

    buckets: dict[str, list[nx.Graph]] = {}
    for _ in range(samples):
        n = rng.randint(lo, hi)
        edges = _random_subcubic(n, rng)
        if edges is None:
            continue
        h = nx.Graph(edges)
        key = nx.weisfeiler_lehman_graph_hash(h)
        bucket = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(h, other) for other in bucket):
            continue
        bucket.append(h)
        yield n, edges


def _random_subcubic(n: int, rng: random.Random) -> list[tuple[int, int]] | None:
    """Random spanning tree plus extra edges, all degrees at most 3."""
    deg = [0] * n
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        choices = [order[j] for j in range(i) if deg[order[j]] < 3]
        if not choices:
            return None
        u = rng.choice(choices)
        v = order[i]
        edges.add(tuple(sorted((u, v))))
        deg[u] += 1
        deg[v] += 1
    for _ in range(rng.randint(1, max(1, n // 2))):
        u, v = rng.sample(range(n), 2)
        if deg[u] < 3 and deg[v] < 3 and tuple(sorted((u, v))) not in edges:
            edges.add(tuple(sorted((u, v))))
            deg[u] += 1
            deg[v] += 1
    return sorted(edges)


def _blocks_on(n: int, edges: list[tuple[int, int]], p: int,
               constraints: SearchConstraints) -> list[BuildingBlock]:
    if len(edges) - n + 1 < constraints.min_betti:
        return []
    g = WeightedGraph([str(i) for i in range(n)], [(str(u), str(v)) for u, v in edges])
    basis = nullspace_mod_p(eigen_matrix(g), p)
    if not basis or len(basis) > constraints.max_eigenspace_dim:
        return []
    candidates = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        # one representative per projective class: first nonzero coefficient 1
        nz = next((c for c in coeffs if c), None)
        if nz != 1:
            continue
        vec = [sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(n)]
        candidates.append(vec)
    sites = [(u, v) for u, v in edges if _deg(edges, u) == 2 and _deg(edges, v) == 2]
    out = []
    for vec in candidates:
        blk = _first_valid_site(g, vec, sites, p, constraints)
        if blk is not None:
            out.append(blk)
    return out


def _first_valid_site(g: WeightedGraph, vec: list[int], sites, p: int,
                      constraints: SearchConstraints) -> BuildingBlock | None:
    try:
        lam = ModularLabeling(p, {str(i): x for i, x in enumerate(vec)})
    except LaplacianError:
        return None
    for u, v in sites:
        for s, t in ((str(u), str(v)), (str(v), str(u))):
            gg = WeightedGraph(g.vertices, g.edges, [edge_key(s, t)])
            blk = BuildingBlock(gg, lam, (s, t), lam[s], lam[t])
            if constraints.boundary_values is not None:
                blk = _rescale_to_boundary(blk, constraints.boundary_values)
                if blk is None:
                    continue
            if validate_block(blk).ok:
                return blk
    return None


def _deg(edges, x) -> int:
    return sum(x in e for e in edges)


def search(p: int, max_vertices: int, constraints: SearchConstraints | None = None,
           seed: int = 0) -> list[BuildingBlock]:
    """Blocks over F_p on at most ``max_vertices`` vertices; deterministic in ``seed``."""
    if p < 7:
        raise LaplacianError(f"prime must be >= 7, got {p}")
    constraints = constraints or SearchConstraints()
    found = search_cycles(p, max_vertices, constraints)
    if not constraints.cycles_only:
        rng = random.Random(seed)
        pools = [_atlas_graphs(min(max_vertices, 7))]
        if max_vertices > 7:
            pools.append(_random_graphs(8, max_vertices, constraints.random_samples, rng))
        for n, edges in itertools.chain(*pools):
            if len(found) >= constraints.max_results:
                break
            if all(_deg(edges, x) == 2 for x in range(n)):
                continue  # cycles handled in closed form
            found.extend(_blocks_on(n, edges, p, constraints))
    found = [b if b.name else replace(b, name=f"S{i}[n={len(b.graph)}]")
             for i, b in enumerate(found)]
    return found[:constraints.max_results]
