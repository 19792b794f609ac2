import random
from fractions import Fraction

import pytest

from eulerch.cellx import CellPoset, SphereComplex, dual, reverse_orientation
from eulerch.errors import NotADifferential, NotNilpotent, SingularMatrix
from eulerch.hodge import (
    GradedComplex,
    GradedSDR,
    bpl_perturb,
    build_sdr,
    dagger,
    green,
    laplacian,
    pseudo_sdr,
    split_sdr,
    verify_graded_sdr,
    verify_sdr,
)
from eulerch.ratlin import Matrix
from eulerch.shapes import polygon, prism_boundary, simplex_boundary, suspend_sphere


C3_LAPLACIAN = Matrix([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])


def corpus():
    spheres = [polygon(m) for m in range(2, 8)]
    spheres += [simplex_boundary(2), simplex_boundary(3), simplex_boundary(4)]
    spheres += [prism_boundary(), dual(simplex_boundary(3)), dual(prism_boundary())]
    return spheres


def test_laplacian_triangle_circle():
    s = polygon(3)
    assert laplacian(s, 0) == C3_LAPLACIAN
    # j = 1 shows the same pattern up to the free edge orientation signs
    lap1 = laplacian(s, 1)
    from itertools import product
    assert any(
        all(lap1[i, j] == d[i] * d[j] * C3_LAPLACIAN[i, j]
            for i in range(3) for j in range(3))
        for d in product((1, -1), repeat=3)
    )


def test_laplacian_symmetry():
    for s in corpus():
        for j in range(s.n + 1):
            lap = laplacian(s, j)
            assert lap == lap.transpose()


def test_green_triangle_circle():
    s = polygon(3)
    third = Fraction(1, 3)
    corrected = C3_LAPLACIAN + Matrix([[third] * 3] * 3)
    g = green(s, 0)
    assert g @ corrected == Matrix.identity(3)


def test_green_middle_degree_is_plain_inverse():
    s = simplex_boundary(3)
    assert green(s, 1) == laplacian(s, 1).inv()


def test_green_singular_on_non_sphere():
    # two disjoint 3-gons: homology is not spherical, Laplacian stays singular
    cells = [(f"v{i}", 0) for i in range(6)] + [(f"e{i}", 1) for i in range(6)]
    covers = []
    for b in (0, 3):
        for i in range(3):
            covers.append((f"v{b + i}", f"e{b + i}"))
            covers.append((f"v{b + (i + 1) % 3}", f"e{b + i}"))
    p = CellPoset(cells, covers)
    # build boundary directly: e_j runs v_j -> v_{j+1} within its triangle
    g = [[0] * 6 for _ in range(6)]
    for b in (0, 3):
        for i in range(3):
            g[b + i][b + i] += 1
            g[b + (i + 1) % 3][b + i] -= 1
    s = SphereComplex(p, 1, [None, Matrix(g)], [1, 1, 1, 1, 1, 1])
    with pytest.raises(SingularMatrix):
        green(s, 0)


def test_dagger_equals_moore_penrose_everywhere():
    for s in corpus():
        for j in range(1, s.n + 1):
            assert dagger(s, j) == s.gamma[j].moore_penrose()


def test_dagger_degree_consistent_identity():
    # gamma^T G_{j-1} equals G_j gamma^T exactly
    for s in corpus():
        for j in range(1, s.n + 1):
            assert s.gamma[j].transpose() @ green(s, j - 1) == \
                green(s, j) @ s.gamma[j].transpose()


def test_build_sdr_triangle_circle_vectors():
    s = polygon(3)
    sdr = build_sdr(s)
    assert sdr.i0 == Matrix.column([Fraction(1, 3)] * 3)
    assert sdr.p_n == Matrix([[Fraction(o, 3) for o in s.fund_class]])
    assert sdr.p0 == Matrix([[1, 1, 1]])


def test_build_sdr_verifies_on_corpus():
    for s in corpus():
        assert verify_sdr(build_sdr(s)).ok


def test_pseudo_sdr_matches_hodge():
    # two independent computation paths for the same splitting
    for s in (polygon(5), simplex_boundary(3)):
        h = build_sdr(s)
        p = pseudo_sdr(s)
        assert h.F[1:] == p.F[1:]
        assert h.i0 == p.i0 and h.p_n == p.p_n


def test_split_sdr_deterministic_and_random():
    rng = random.Random(3)
    for s in (polygon(4), simplex_boundary(3), suspend_sphere(polygon(3))):
        det = split_sdr(s)
        assert verify_sdr(det).ok
        rnd = split_sdr(s, rng)
        assert verify_sdr(rnd).ok
        # genuinely different homotopies than the Hodge one, same identities
        hodge = build_sdr(s)
        assert any(det.F[j] != hodge.F[j] for j in range(1, s.n + 1)) or s.n == 0


def test_verify_sdr_mutation_fails():
    s = polygon(4)
    sdr = build_sdr(s)
    bad = [None] + [m for m in sdr.F[1:]]
    rows = [list(r) for r in bad[1].data]
    rows[0][0] += 1
    bad[1] = Matrix(rows)
    sdr.F = bad
    assert not verify_sdr(sdr).ok


def test_orientation_reversal_negates_ends_only():
    s = simplex_boundary(3)
    r = reverse_orientation(s)
    a, b = build_sdr(s), build_sdr(r)
    assert b.i_n == -1 * a.i_n
    assert b.p_n == -1 * a.p_n
    assert a.F[1:] == b.F[1:]
    assert a.i0 == b.i0


def test_laplacian_commutes_with_boundary():
    for s in corpus():
        for j in range(1, s.n + 1):
            assert s.gamma[j] @ laplacian(s, j) == laplacian(s, j - 1) @ s.gamma[j]


def _tiny_sdr(dims):
    n = len(dims) - 1
    big = GradedComplex(dims=dims, d={})
    small = GradedComplex(dims=dims, d={})
    i = {k: Matrix.identity(dims[k]) for k in range(n + 1)}
    p = {k: Matrix.identity(dims[k]) for k in range(n + 1)}
    return GradedSDR(big=big, small=small, i=i, p=p, F={})


def test_bpl_zero_perturbation_is_identity():
    sdr = _tiny_sdr([2, 2])
    d_psi, p_psi, i_psi, F_psi = bpl_perturb(sdr, {})
    assert all(m.is_zero() for m in d_psi.values())
    assert i_psi[0] == Matrix.identity(2)
    assert p_psi[1] == Matrix.identity(2)


def test_bpl_simple_perturbation():
    sdr = _tiny_sdr([1, 1])
    psi = {1: Matrix([[5]])}
    d_psi, _, _, _ = bpl_perturb(sdr, psi)
    assert d_psi[1] == Matrix([[5]])


def test_bpl_not_a_differential():
    sdr = _tiny_sdr([1, 1, 1])
    psi = {1: Matrix([[1]]), 2: Matrix([[1]])}
    with pytest.raises(NotADifferential):
        bpl_perturb(sdr, psi)


def test_bpl_not_nilpotent():
    big = GradedComplex(dims=[1, 1], d={})
    small = GradedComplex(dims=[0, 0], d={})
    sdr = GradedSDR(
        big=big, small=small,
        i={}, p={},
        F={0: Matrix([[1]])},
    )
    with pytest.raises(NotNilpotent):
        bpl_perturb(sdr, {1: Matrix([[1]])})


def test_verify_graded_sdr_on_sphere_splitting():
    # package one sphere SDR as a graded SDR and verify all identities
    s = simplex_boundary(3)
    sdr = build_sdr(s)
    n = s.n
    dims = s.dims()
    hdims = [1] + [0] * (n - 1) + [1]
    big = GradedComplex(dims=dims, d={j: s.gamma[j] for j in range(1, n + 1)})
    small = GradedComplex(dims=hdims, d={})
    i = {0: sdr.i0, n: sdr.i_n}
    p = {0: sdr.p0, n: sdr.p_n}
    F = {j - 1: sdr.F[j] for j in range(1, n + 1)}
    g = GradedSDR(big=big, small=small, i=i, p=p, F=F)
    assert verify_graded_sdr(g).ok
