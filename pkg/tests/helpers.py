"""Independent oracles and generators shared by the test modules."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from elliptic_blocks.graph_core import WeightedGraph


def random_subcubic(rng: random.Random, n: int, extra: int | None = None,
                    forbid_adjacent_3: bool = False) -> WeightedGraph:
    """Connected graph on n vertices with max degree 3, built by random attachment."""
    while True:
        deg = [0] * n
        edges = set()
        ok = True
        for v in range(1, n):
            cands = [u for u in range(v) if deg[u] < 3]
            if not cands:
                ok = False
                break
            u = rng.choice(cands)
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
        if not ok:
            continue
        tries = extra if extra is not None else rng.randint(0, n)
        for _ in range(tries):
            u, v = sorted(rng.sample(range(n), 2))
            if (u, v) in edges or deg[u] >= 3 or deg[v] >= 3:
                continue
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
        if forbid_adjacent_3:
            edges = _break_adjacent_3(edges, n, rng)
            if edges is None:
                continue
        return WeightedGraph([str(i) for i in range(n)], [(str(u), str(v)) for u, v in edges])


def _break_adjacent_3(edges, n, rng):
    """Drop non-bridge edges between degree-3 vertices until none remain."""
    edges = set(edges)
    while True:
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        bad = sorted(e for e in edges if deg[e[0]] == 3 and deg[e[1]] == 3)
        if not bad:
            return edges
        rng.shuffle(bad)
        for e in bad:
            rest = edges - {e}
            if _connected(rest, n):
                edges = rest
                break
        else:
            return None


def _connected(edges, n) -> bool:
    adj = {i: set() for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def leibniz_det(m) -> int:
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def brute_circle_kernel(m, denom: int) -> int:
    """Count y in (Z/denom)^n with m y = 0 mod denom, i.e. x = y/denom in (R/Z)^n."""
    n = len(m)
    count = 0
    for y in itertools.product(range(denom), repeat=n):
        if all(sum(a * b for a, b in zip(row, y)) % denom == 0 for row in m):
            count += 1
    return count


def brute_torus_kernel_2d(m, denom: int) -> int:
    """Enumerate (1/denom)Z^2/Z^2 points per vertex directly, both coordinates at once."""
    n = len(m)
    count = 0
    pts = list(itertools.product(range(denom), repeat=2))
    for xs in itertools.product(pts, repeat=n):
        if all(sum(a * xs[j][c] for j, a in enumerate(row)) % denom == 0
               for row in m for c in (0, 1)):
            count += 1
    return count


def brute_nullspace_size(m, p: int) -> int:
    n = len(m[0])
    return sum(1 for v in itertools.product(range(p), repeat=n)
               if all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in m))


def literal_strong_irreducibility(g: WeightedGraph, values: dict, p: int) -> list:
    """Check the definition over every induced subgraph H, using the normalized
    Laplacian: F_H lambda(v) = Delta_H lambda(v) - (5/3) lambda(v) over F_p."""
    verts = list(g.vertices)
    inv3 = pow(3, -1, p)
    bad = []
    for v in verts:
        others = [u for u in verts if u != v]
        nbrs = set(g.neighbors(v))
        for r in range(len(others) + 1):
            for rest in itertools.combinations(others, r):
                h = set(rest)
                hn = [w for w in nbrs if w in h]
                k = len(hn)
                if k == 0:
                    continue
                lap = (k * values[v] - sum(values[w] for w in hn)) * pow(k, -1, p)
                f = (lap - 5 * inv3 * values[v]) % p
                if f == 0 and k != len(nbrs):
                    bad.append((v, tuple(sorted(hn))))
    return sorted(set(bad))


def rational_eigen_residual(g: WeightedGraph, f: dict, v: str) -> Fraction:
    """Delta f(v) - (5/3) f(v) with the normalized Laplacian over Q."""
    nbrs = g.neighbors(v)
    lap = Fraction(sum(f[v] - f[w] for w in nbrs), len(nbrs))
    return lap - Fraction(5, 3) * f[v]
