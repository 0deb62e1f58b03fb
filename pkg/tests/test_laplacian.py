import random
from fractions import Fraction

import networkx as nx
import pytest
import sympy

from elliptic_blocks.exact_algebra import TorusPoint
from elliptic_blocks.graph_core import WeightedGraph
from elliptic_blocks.laplacian import (
    LaplacianError,
    ModularLabeling,
    eigen_coefficients,
    eigen_matrix,
    eigen_residual,
    eigen_solutions_mod_p,
    is_eigenvector,
    laplacian_normalized,
    laplacian_unnormalized,
    no_adjacent_degree3,
    rational_triviality,
)

from helpers import random_subcubic, rational_eigen_residual


def _from_nx(h):
    return WeightedGraph([str(v) for v in h.nodes], [(str(u), str(v)) for u, v in h.edges])


def test_laplacians_at_value_four(g1):
    v = "2"
    assert g1.labeling[v] == 4
    assert laplacian_unnormalized(g1.graph, g1.labeling, v) == 21
    assert laplacian_normalized(g1.graph, g1.labeling, v) == 22
    # 5/3 * 4 in F_23
    assert 5 * pow(3, -1, 23) * 4 % 23 == 22


def test_spot_check_residual(g1):
    assert 3 * (2 + 8) + 2 * 2 * 4 == 46
    assert eigen_residual(g1.graph, g1.labeling, "2") == 0


def test_perturbed_labeling_fails(g1):
    bad = g1.labeling.with_value("2", 5)
    assert not is_eigenvector(g1.graph, bad)
    assert eigen_residual(g1.graph, bad, "2") == (3 * 10 + 4 * 5) % 23


def test_constant_labeling_has_zero_laplacian(g1):
    lam = ModularLabeling(23, {v: 7 for v in g1.graph.vertices})
    assert all(laplacian_unnormalized(g1.graph, lam, v) == 0 for v in g1.graph.vertices)


def test_weighted_laplacian_over_rationals_and_torus():
    g = WeightedGraph(["a", "b", "c"], {("a", "b"): 2, ("b", "c"): 3})
    f = {"a": Fraction(1), "b": Fraction(1, 2), "c": Fraction(0)}
    assert laplacian_unnormalized(g, f, "b") == 2 * (Fraction(1, 2) - 1) + 3 * Fraction(1, 2)
    assert laplacian_normalized(g, f, "b") == Fraction(1, 2) / 5
    t = {k: TorusPoint(x, 0) for k, x in f.items()}
    assert laplacian_unnormalized(g, t, "b") == TorusPoint(Fraction(1, 2), 0)
    with pytest.raises(LaplacianError):
        laplacian_normalized(g, t, "b")


def test_noninvertible_degree():
    g = WeightedGraph(["a", "b"], {("a", "b"): 7})
    lam = ModularLabeling(7, {"a": 1, "b": 2})
    with pytest.raises(LaplacianError):
        laplacian_normalized(g, lam, "a")


def test_labeling_validation():
    with pytest.raises(LaplacianError):
        ModularLabeling(5, {"a": 1})
    with pytest.raises(LaplacianError):
        ModularLabeling(21, {"a": 1})
    with pytest.raises(LaplacianError):
        ModularLabeling(23, {"a": 23})


def test_eigen_coefficients():
    assert eigen_coefficients() == (3, 2)
    assert eigen_coefficients(Fraction(7, 2)) == (2, 5)


def test_residual_matches_normalized_definition():
    # the cleared residual is -3*deg times Delta f - 5/3 f
    rng = random.Random(1)
    for _ in range(100):
        g = random_subcubic(rng, rng.randint(2, 9))
        f = {v: Fraction(rng.randint(-9, 9)) for v in g.vertices}
        p = 10007
        lam = ModularLabeling(p, {v: int(x) % p for v, x in f.items()})
        for v in g.vertices:
            q = -3 * g.degree(v) * rational_eigen_residual(g, f, v)
            assert q.denominator == 1
            assert int(q) % p == eigen_residual(g, lam, v)


def test_cycle_scan_agrees_with_nullspace():
    # lambda(i) = r**i on a cycle iff 3r^2 + 4r + 3 = 0 and r**m = 1
    for p in (7, 11, 13, 17, 19, 23, 29, 31):
        # otherwise the roots sit in F_{p^2} and can still produce eigenvectors
        split = any((3 * r * r + 4 * r + 3) % p == 0 for r in range(p))
        for m in range(3, 14):
            g = WeightedGraph([str(i) for i in range(m)],
                              [(str(i), str((i + 1) % m)) for i in range(m)])
            roots = [r for r in range(1, p)
                     if (3 * r * r + 4 * r + 3) % p == 0 and pow(r, m, p) == 1]
            for r in roots:
                lam = ModularLabeling(p, {str(i): pow(r, i, p) for i in range(m)})
                assert is_eigenvector(g, lam)
            has_solution = len(eigen_solutions_mod_p(g, p)) > 0
            if split:
                assert has_solution == bool(roots)
            elif roots:
                assert has_solution


def test_eigen_solutions_are_eigenvectors(blocks):
    for blk in blocks.values():
        sols = eigen_solutions_mod_p(blk.graph, 23)
        assert sols
        assert all(is_eigenvector(blk.graph, s) for s in sols)


def test_eigen_residual_is_linear():
    rng = random.Random(2)
    g = random_subcubic(rng, 8)
    for _ in range(30):
        a = {v: rng.randrange(23) for v in g.vertices}
        b = {v: rng.randrange(23) for v in g.vertices}
        s = {v: (a[v] + b[v]) % 23 for v in g.vertices}
        la, lb, ls = (ModularLabeling(23, x) for x in (a, b, s))
        for v in g.vertices:
            assert eigen_residual(g, ls, v) == (eigen_residual(g, la, v)
                                                + eigen_residual(g, lb, v)) % 23


def test_rational_triviality_examples(blocks):
    assert rational_triviality(blocks["G1"].graph)
    assert rational_triviality(blocks["G3"].graph)
    edge = WeightedGraph(["a", "b"], [("a", "b")])
    assert sympy.Matrix(eigen_matrix(edge)).det() == -5
    assert rational_triviality(edge)
    # Petersen graph: adjacency eigenvalue -2 gives 6 + 3*(-2) = 0
    petersen = _from_nx(nx.petersen_graph())
    assert not rational_triviality(petersen)
    assert not no_adjacent_degree3(petersen)


def test_rational_triviality_against_sympy():
    rng = random.Random(4)
    for _ in range(60):
        g = random_subcubic(rng, rng.randint(2, 10))
        det = sympy.Matrix(eigen_matrix(g)).det()
        assert rational_triviality(g) == (det != 0)


def test_no_adjacent_degree3_examples():
    star = WeightedGraph(["c", "x", "y", "z"], [("c", "x"), ("c", "y"), ("c", "z")])
    assert no_adjacent_degree3(star)
    k4 = _from_nx(nx.complete_graph(4))
    assert not no_adjacent_degree3(k4)
    k5 = _from_nx(nx.complete_graph(5))
    with pytest.raises(LaplacianError):
        no_adjacent_degree3(k5)


def test_rational_triviality_holds_without_adjacent_degree3():
    rng = random.Random(7)
    for _ in range(300):
        g = random_subcubic(rng, rng.randint(2, 16), forbid_adjacent_3=True)
        assert no_adjacent_degree3(g)
        assert rational_triviality(g)
