from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from eulerch.errors import SingularMatrix
from eulerch.ratlin import Matrix, betti_numbers, block_matrix, smith_normal_form


def rand_matrix(rng, rows, cols, lo=-4, hi=4, denoms=(1, 1, 1, 2, 3)):
    return Matrix([
        [Fraction(rng.randint(lo, hi), rng.choice(denoms)) for _ in range(cols)]
        for _ in range(rows)
    ])


def test_identity_inverse():
    m = Matrix.identity(3)
    assert m.inv() == m


def test_inverse_2x2_frozen():
    m = Matrix([[1, 2], [3, 4]])
    inv = m.inv()
    assert inv == Matrix([[-2, 1], [Fraction(3, 2), Fraction(-1, 2)]])
    assert m @ inv == Matrix.identity(2)
    assert inv @ m == Matrix.identity(2)


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        Matrix([[1, 1], [1, 1]]).inv()


def test_inverse_rational_entries():
    m = Matrix([[Fraction(1, 2), 1], [0, Fraction(3, 5)]])
    assert m @ m.inv() == Matrix.identity(2)


def test_rank_basics():
    assert Matrix.identity(4).rank() == 4
    assert Matrix([[1, 2], [2, 4]]).rank() == 1
    assert Matrix.zeros(3, 5).rank() == 0
    assert Matrix.zeros(0, 5).rank() == 0


def test_rank_matches_minor_bruteforce():
    # independent oracle: largest k with a nonsingular k x k minor
    rng = random.Random(7)
    from itertools import combinations

    for _ in range(12):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = rand_matrix(rng, rows, cols)
        best = 0
        for k in range(1, min(rows, cols) + 1):
            for ri in combinations(range(rows), k):
                for ci in combinations(range(cols), k):
                    if m.submatrix(ri, ci).det() != 0:
                        best = max(best, k)
        assert m.rank() == best


def test_det_triangle_and_scale():
    m = Matrix([[2, 1, 0], [0, 3, 5], [0, 0, Fraction(1, 4)]])
    assert m.det() == Fraction(3, 2)
    assert Matrix([[0, 1], [1, 0]]).det() == -1


def test_rref_and_kernel():
    m = Matrix([[1, 2, 3], [2, 4, 6]])
    r, pivots = m.rref()
    assert pivots == (0,)
    k = m.kernel()
    assert k.shape == (3, 2)
    assert (m @ k).is_zero()


def test_solve_unique_and_inconsistent():
    a = Matrix([[1, 1], [0, 1]])
    x, unique = a.solve(Matrix.column([3, 1]))
    assert unique and x == Matrix.column([2, 1])
    a2 = Matrix([[1, 1], [1, 1]])
    x2, _ = a2.solve(Matrix.column([0, 1]))
    assert x2 is None


def penrose_ok(m, mp):
    return (
        m @ mp @ m == m
        and mp @ m @ mp == mp
        and (m @ mp).transpose() == m @ mp
        and (mp @ m).transpose() == mp @ m
    )


def test_moore_penrose_zero_and_invertible():
    z = Matrix.zeros(2, 3)
    assert z.moore_penrose() == Matrix.zeros(3, 2)
    m = Matrix([[1, 2], [3, 4]])
    assert m.moore_penrose() == m.inv()


def test_moore_penrose_polygon_boundary():
    # boundary matrix of the 3-gon circle
    g1 = Matrix([[1, 0, -1], [-1, 1, 0], [0, -1, 1]])
    mp = g1.moore_penrose()
    assert penrose_ok(g1, mp)
    assert g1.rank() == 2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_moore_penrose_penrose_identities(data):
    rows = data.draw(st.integers(0, 4))
    cols = data.draw(st.integers(0, 4))
    entries = st.fractions(
        min_value=-3, max_value=3, max_denominator=3
    )
    m = Matrix([
        [data.draw(entries) for _ in range(cols)] for _ in range(rows)
    ], shape=(rows, cols))
    mp = m.moore_penrose()
    assert penrose_ok(m, mp)


def test_snf_zero_identity_frozen():
    u, d, v = smith_normal_form(Matrix.zeros(2, 2))
    assert d == Matrix.zeros(2, 2)
    u, d, v = smith_normal_form(Matrix.identity(3))
    assert d == Matrix.identity(3)
    u, d, v = smith_normal_form(Matrix([[2, 4], [6, 8]]))
    assert d == Matrix.diagonal([2, 4])


def snf_ok(m):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


def test_snf_random_properties():
    rng = random.Random(11)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = Matrix([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)])
        snf_ok(m)


def test_snf_known_torsion():
    # presentation matrix of Z/2 + Z/6
    m = Matrix([[2, 0], [0, 6]])
    _, d, _ = smith_normal_form(m)
    assert [d[0, 0], d[1, 1]] == [2, 6]
    m2 = Matrix([[4, 2], [2, 4]])
    _, d2, _ = smith_normal_form(m2)
    assert [d2[0, 0], d2[1, 1]] == [2, 6]


def test_block_matrix_assembly():
    b = block_matrix(
        [2, 1], [1, 2],
        {(0, 0): Matrix.column([1, 2]), (1, 1): Matrix([[3, 4]])},
    )
    assert b == Matrix([[1, 0, 0], [2, 0, 0], [0, 3, 4]])


def test_betti_of_circle_complex():
    # 3-gon: 3 vertices, 3 edges
    g1 = Matrix([[1, 0, -1], [-1, 1, 0], [0, -1, 1]])
    assert betti_numbers([3, 3], [None, g1]) == [1, 1]


def test_empty_matrix_algebra():
    e = Matrix.zeros(0, 3)
    assert (e.transpose() @ e.transpose().transpose()) == Matrix.zeros(3, 3)
    assert Matrix.identity(0).det() == 1
