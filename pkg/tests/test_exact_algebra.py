import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from elliptic_blocks.exact_algebra import (
    AlgebraError,
    TorusPoint,
    circle_kernel_points,
    determinant,
    embed_fp_diagonally,
    is_nonsingular,
    nullspace_mod_p,
    nullspace_over_rationals,
    rank_mod_p,
    rank_over_rationals,
    smith_normal_form,
    torus_kernel,
    torus_kernel_points,
)
from elliptic_blocks.laplacian import eigen_matrix

from helpers import brute_circle_kernel, brute_nullspace_size, leibniz_det

small_matrix = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                       min_size=n, max_size=n))


def test_rank_examples():
    assert rank_over_rationals([[1, 2], [2, 4]]) == 1
    assert rank_over_rationals([[0, 0], [0, 0]]) == 0
    assert rank_over_rationals([[0, 0, -5], [0, 0, -5], [-15, -15, 10]]) == 2
    assert rank_over_rationals([[1, 0, 0], [0, 1, 0]]) == 2


@given(small_matrix)
def test_rank_and_det_match_sympy_and_leibniz(m):
    assert rank_over_rationals(m) == sympy.Matrix(m).rank()
    assert determinant(m) == leibniz_det(m)
    assert is_nonsingular(m) == (leibniz_det(m) != 0)


def test_rank_mod_p_drops():
    assert rank_mod_p([[23]], 23) == 0
    assert rank_mod_p([[2, 1], [1, 2]], 3) == 1
    assert rank_over_rationals([[2, 1], [1, 2]]) == 2


def test_nullspace_mod_p_single_entry():
    assert nullspace_mod_p([[23]], 23) == [[1]]
    assert nullspace_mod_p([[1]], 23) == []


def test_nullspace_mod_p_against_enumeration():
    rng = random.Random(11)
    for _ in range(150):
        p = rng.choice([2, 3, 5])
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)]
        basis = nullspace_mod_p(m, p)
        assert p ** len(basis) == brute_nullspace_size(m, p)
        for vec in basis:
            assert all(sum(a * b for a, b in zip(row, vec)) % p == 0 for row in m)


def test_g1_nullspace_contains_the_labeling(g1):
    m = eigen_matrix(g1.graph)
    basis = nullspace_mod_p(m, 23)
    # 2**i and 12**i = 2**(-i) both live on the 11-cycle
    assert len(basis) == 2
    vec = g1.labeling.vector(g1.graph)
    assert rank_mod_p(basis + [vec], 23) == 2
    reverse = [pow(12, i, 23) for i in range(11)]
    assert rank_mod_p(basis + [reverse], 23) == 2


def test_nullspace_over_rationals():
    assert nullspace_over_rationals([[1, 2], [2, 4]]) == [[-2, 1]]
    assert nullspace_over_rationals([[1, 0], [0, 1]]) == []
    for vec in nullspace_over_rationals([[1, 1, 1], [2, 2, 2]]):
        assert sum(vec) == 0


def test_nonsquare_errors():
    with pytest.raises(AlgebraError):
        determinant([[1, 2]])
    with pytest.raises(AlgebraError):
        torus_kernel([[1, 2]])
    with pytest.raises(AlgebraError):
        nullspace_mod_p([[1]], 4)


@pytest.mark.parametrize("m, factors, rank", [
    ([[2, 0], [0, 3]], (1, 6), 2),
    ([[1, 0], [0, 1]], (1, 1), 2),
    ([[0]], (0,), 0),
    ([[2, 4], [6, 8]], (2, 4), 2),
    ([[0, 0, -5], [0, 0, -5], [-15, -15, 10]], (5, 15, 0), 2),
])
def test_smith_examples(m, factors, rank):
    snf = smith_normal_form(m)
    assert snf.factors == factors
    assert snf.rank == rank


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


@given(small_matrix)
def test_smith_invariants(m):
    snf = smith_normal_form(m)
    n = len(m)
    left, right = [list(r) for r in snf.left], [list(r) for r in snf.right]
    diag = _matmul(_matmul(left, m), right)
    assert all(diag[i][j] == (snf.factors[i] if i == j else 0)
               for i in range(n) for j in range(n))
    assert abs(leibniz_det(left)) == 1 and abs(leibniz_det(right)) == 1
    nz = [d for d in snf.factors if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert snf.rank == len(nz) == sympy.Matrix(m).rank()


@pytest.mark.parametrize("m, text", [
    ([[1]], "FINITE(1)"),
    ([[2]], "FINITE(4)"),
    ([[0]], "INFINITE(2)"),
    ([[2, 1], [1, 2]], "FINITE(9)"),
    ([[1, 2], [2, 4]], "INFINITE(2)"),
    ([[0, 0], [0, 0]], "INFINITE(4)"),
])
def test_torus_kernel_examples(m, text):
    assert str(torus_kernel(m)) == text


def test_torus_kernel_dim1():
    assert str(torus_kernel([[3, 0], [0, 2]], torus_dim=1)) == "FINITE(6)"


def test_kernel_points_against_lattice():
    rng = random.Random(5)
    seen = 0
    while seen < 40:
        n = rng.randint(1, 3)
        m = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        det = abs(leibniz_det(m))
        if not 0 < det <= 6:
            continue
        seen += 1
        pts = circle_kernel_points(m)
        assert len(pts) == det == brute_circle_kernel(m, det)
        for x in pts:
            assert all(sum(a * xi for a, xi in zip(row, x)) % 1 == 0 for row in m)
            assert all((det * xi).denominator == 1 for xi in x)
        assert len(torus_kernel_points(m)) == det ** 2


def test_kernel_points_need_finite_kernel():
    with pytest.raises(AlgebraError):
        circle_kernel_points([[0]])


def test_torus_point_arithmetic():
    a = TorusPoint(Fraction(3, 4), Fraction(1, 2))
    assert a + a == TorusPoint(Fraction(1, 2), 0)
    assert (4 * a).is_zero()
    assert (a - a).is_zero()
    assert -a == TorusPoint(Fraction(1, 4), Fraction(1, 2))
    assert TorusPoint(Fraction(5, 4), -1) == TorusPoint(Fraction(1, 4), 0)


def test_embedding_examples():
    assert embed_fp_diagonally(0, 23).is_zero()
    assert embed_fp_diagonally(1, 23) == TorusPoint(Fraction(1, 23), Fraction(1, 23))
    assert embed_fp_diagonally(22, 23) == -embed_fp_diagonally(1, 23)
    with pytest.raises(AlgebraError):
        embed_fp_diagonally(23, 23)


@given(st.integers(0, 22), st.integers(0, 22), st.integers(-30, 30))
def test_embedding_is_a_homomorphism(a, b, k):
    e = lambda x: embed_fp_diagonally(x % 23, 23)  # noqa: E731
    assert e(a) + e(b) == e(a + b)
    assert k * e(a) == e(k * a)


def test_cert_prime_fallback_is_exact():
    # singular over Q, so the modular shortcut must not claim otherwise
    for m in ([[1, 2], [2, 4]], [[0]], [[3, 3, 3], [1, 2, 3], [4, 5, 6]]):
        assert not is_nonsingular(m)
    big = [[2 ** 61 - 1, 0], [0, 1]]
    assert is_nonsingular(big)
