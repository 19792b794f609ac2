import pytest

from eulerch.cellx import (
    CellPoset,
    chain_sphere,
    dual,
    flip_cell,
    orient,
    order_complex,
    permute_cells,
    reverse_orientation,
    validate_sphere,
)
from eulerch.errors import InvalidComplex
from eulerch.ratlin import Matrix
from eulerch.shapes import (
    polygon,
    polygon_poset,
    prism_boundary,
    prism_boundary_poset,
    simplex_boundary,
    simplex_boundary_poset,
    suspend_sphere,
)
from eulerch.simplicial import has_sphere_homology


def test_order_complex_point():
    p = CellPoset([("v", 0)], [])
    oc = order_complex(p)
    assert oc.counts() == [1]


def test_order_complex_interval():
    p = CellPoset([("a", 0), ("b", 0), ("e", 1)], [("a", "e"), ("b", "e")])
    oc = order_complex(p)
    assert oc.counts() == [3, 2]


def test_order_complex_triangle_circle_is_hexagon():
    oc = order_complex(polygon_poset(3))
    assert oc.counts() == [6, 6]
    assert has_sphere_homology(oc, 1, ring="Z")


def test_validate_sphere_corpus():
    assert validate_sphere(simplex_boundary_poset(3), 2).ok
    for m in (2, 3, 5):
        assert validate_sphere(polygon_poset(m), 1).ok
    assert validate_sphere(prism_boundary_poset(), 2).ok


def test_validate_disk_fails():
    # a single triangle with its faces: a disk, not a sphere
    cells = [("a", 0), ("b", 0), ("c", 0),
             ("ab", 1), ("bc", 1), ("ca", 1), ("t", 2)]
    covers = [("a", "ab"), ("b", "ab"), ("b", "bc"), ("c", "bc"),
              ("c", "ca"), ("a", "ca"),
              ("ab", "t"), ("bc", "t"), ("ca", "t")]
    rep = validate_sphere(CellPoset(cells, covers), 2)
    assert not rep.ok


def test_validate_wrong_dim_fails():
    assert not validate_sphere(polygon_poset(4), 2).ok


def test_orient_polygon():
    s = polygon(3)
    g1 = s.gamma[1]
    assert all(abs(g1[i, j]) in (0, 1) for i in range(3) for j in range(3))
    assert (g1 @ s.i_n_col()).is_zero()
    assert set(s.fund_class) <= {1, -1}
    assert s.fund_class[0] == 1
    assert (s.p0_row() @ g1).is_zero()


def test_orient_simplex_boundary():
    s = simplex_boundary(3)
    assert s.n == 2
    assert len(s.fund_class) == 4
    assert (s.gamma[2] @ s.i_n_col()).is_zero()
    assert (s.gamma[1] @ s.gamma[2]).is_zero()


def test_orient_rejects_dangling_cover():
    cells = [("a", 0), ("b", 0), ("c", 0), ("e", 1), ("f", 1)]
    covers = [("a", "e"), ("b", "e"), ("b", "f"), ("c", "f")]
    with pytest.raises(InvalidComplex):
        orient(CellPoset(cells, covers), 1)


def test_chain_sphere_vectors():
    bc = chain_sphere(polygon(3))
    assert bc.p0 == Matrix([[1, 1, 1]])
    assert bc.i_n.shape == (3, 1)
    bc2 = chain_sphere(polygon(2))
    assert bc2.p0 == Matrix([[1, 1]])


def test_dual_polygon_self():
    s = polygon(4)
    d = dual(s)
    assert d.n == 1
    assert validate_sphere(d.poset, 1).ok
    assert d.w == 4 and d.f == 4


def test_dual_simplex_boundary():
    s = simplex_boundary(3)
    d = dual(s)
    assert validate_sphere(d.poset, 2).ok
    assert (d.w, d.f) == (4, 4)
    assert len(d.poset.cells_of_dim(1)) == 6
    assert d.poset.dim == 2
    chi = sum((-1) ** k * len(d.poset.cells_of_dim(k)) for k in range(3))
    assert chi == 2


def test_dual_involution_poset():
    s = simplex_boundary(3)
    dd = dual(dual(s))
    assert sorted(dd.poset.cells) == sorted(s.poset.cells)
    assert set(dd.poset.covers) == set(s.poset.covers)
    assert validate_sphere(dd.poset, 2).ok


def test_homology_of_oriented_complexes():
    # rational homology of the cellular chain complex: Q at 0 and n only
    for s in (polygon(5), simplex_boundary(3), prism_boundary(), simplex_boundary(4)):
        n = s.n
        dims = s.dims()
        from eulerch.ratlin import betti_numbers
        b = betti_numbers(dims, [None] + s.gamma[1:])
        want = [0] * (n + 1)
        want[0] = want[n] = 1
        assert b == want


def test_suspension_is_sphere():
    s2 = suspend_sphere(polygon(4))
    assert s2.n == 2
    assert validate_sphere(s2.poset, 2).ok


def test_reverse_and_flip_orientation():
    s = polygon(3)
    r = reverse_orientation(s)
    assert r.fund_class == tuple(-x for x in s.fund_class)
    f = flip_cell(s, "e1")
    assert (f.gamma[1] @ f.i_n_col()).is_zero()
    assert f.gamma[1] != s.gamma[1]


def test_permute_cells_reorients():
    p = permute_cells(polygon_poset(4), {1: ["e2", "e0", "e3", "e1"]})
    s = orient(p, 1)
    assert s.basis(1) == ("e2", "e0", "e3", "e1")
    assert (s.p0_row() @ s.gamma[1]).is_zero()
