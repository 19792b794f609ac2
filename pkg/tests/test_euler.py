import random
from fractions import Fraction

import pytest

from eulerch.aggmap import identity_aggregation
from eulerch.cellx import reverse_orientation
from eulerch.errors import NotACycle, NotComposable
from eulerch.euler import (
    coboundary_solve,
    euler_cochain,
    euler_local,
    formal_euler,
    hodge_sdrs,
    period,
    twisted_boundaries,
    twisted_complex,
    verify_cocycle,
)
from eulerch.hodge import bpl_perturb, build_sdr, split_sdr
from eulerch.locsys import (
    chain_system,
    constant_system,
    to_chain_system,
    tot_sdr,
    total_complex,
    total_homology,
)
from eulerch.ratlin import Matrix
from eulerch.shapes import (
    block_polygon_chain,
    full_simplex_complex,
    polygon,
    polygon_chain,
    simplex_boundary_complex,
    simplex_fundamental_cycle,
    suspended_chain,
)
from eulerch.simplicial import SimplicialComplex


def test_identity_chain_vanishes():
    s = polygon(5)
    chain = [identity_aggregation(s), identity_aggregation(s)]
    assert euler_local(chain) == 0


def test_not_composable():
    with pytest.raises(NotComposable):
        euler_local([identity_aggregation(polygon(3)), identity_aggregation(polygon(4))])
    with pytest.raises(NotComposable):
        euler_local(polygon_chain((6, 3)))  # wrong length for n = 1


def test_local_equals_formal_on_stalk():
    chain = polygon_chain((12, 6, 3))
    base = full_simplex_complex(2)
    ls = to_chain_system(chain_system(base, chain))
    sdrs = hodge_sdrs(ls)
    top = ls.base.of_dim(2)[0]
    assert formal_euler(ls, sdrs, top) == euler_local(chain)


def test_asymmetric_chains_are_nonzero():
    # uniform coarsenings are symmetric and vanish; uneven blocks do not
    assert euler_local(polygon_chain((12, 6, 3))) == 0
    v1 = euler_local(block_polygon_chain([(1, 2, 3), (2, 1)]))
    v2 = euler_local(block_polygon_chain([(2, 1, 1), (2, 1)]))
    assert v1 == Fraction(-1, 36)
    assert v2 == Fraction(1, 24)


def test_orientation_reversal_negates_value():
    chain = block_polygon_chain([(2, 1, 1), (2, 1)])
    val = euler_local(chain)
    assert val != 0
    flipped = [reverse_orientation(s) for s in
               [chain[0].source, chain[0].target, chain[1].target]]
    from eulerch.aggmap import Aggregation, subdivision_chain_map
    rchain = [
        subdivision_chain_map(Aggregation(flipped[0], flipped[1], chain[0].cell_map)),
        subdivision_chain_map(Aggregation(flipped[1], flipped[2], chain[1].cell_map)),
    ]
    assert euler_local(rchain) == -val


def test_constant_cochain_zero_and_periods_vanish():
    base = simplex_boundary_complex(3)
    cs = constant_system(base, polygon(3))
    t = euler_cochain(cs)
    assert all(v == 0 for v in t.values.values())
    z = simplex_fundamental_cycle(base, 2)
    assert period(t, z) == 0


def test_cocycle_condition_on_chain_systems():
    # base with (n+2)-simplices: the full 3-simplex, n = 1
    base = full_simplex_complex(3)
    cs = chain_system(base, polygon_chain((24, 12, 6, 3)))
    t = euler_cochain(cs)
    assert verify_cocycle(t).ok


def test_cocycle_mutation_fails():
    base = full_simplex_complex(3)
    cs = chain_system(base, polygon_chain((8, 4, 2, 2)))
    t = euler_cochain(cs)
    s = next(iter(t.values))
    t.values[s] = t.values[s] + 1
    assert not verify_cocycle(t).ok


def test_period_integrality_on_closed_base():
    base = simplex_boundary_complex(3)
    cs = chain_system(base, polygon_chain((24, 12, 6, 3)))
    t = euler_cochain(cs)
    z = simplex_fundamental_cycle(base, 2)
    val = period(t, z)
    assert val.denominator == 1
    assert val == 0  # the system extends over the solid simplex


def test_period_rejects_non_cycle():
    base = simplex_boundary_complex(3)
    cs = constant_system(base, polygon(3))
    t = euler_cochain(cs)
    with pytest.raises(NotACycle):
        period(t, {base.of_dim(2)[0]: 1})


def test_twisted_complex_kunneth_for_zero_cochain():
    base = simplex_boundary_complex(3)
    cs = constant_system(base, polygon(3))
    ls = to_chain_system(cs)
    t = euler_cochain(ls)
    cx = twisted_complex(ls, t)
    assert cx.betti() == [1, 1, 1, 1]


def test_twisted_betti_equals_total_betti():
    base = full_simplex_complex(2)
    for sizes in ((6, 3, 3), (12, 6, 3)):
        cs = chain_system(base, polygon_chain(sizes))
        ls = to_chain_system(cs)
        t = euler_cochain(ls)
        cx = twisted_complex(ls, t)
        assert cx.betti() == total_homology(total_complex(ls), "Q").betti


def test_bpl_route_reproduces_twisted_differential():
    # the perturbation lemma on the total complex must give exactly
    # the boundary twisted by the euler cochain
    base = full_simplex_complex(2)
    cs = chain_system(base, polygon_chain((12, 6, 3)))
    ls = to_chain_system(cs)
    t = total_complex(ls)
    sdrs = hodge_sdrs(ls)
    sdr, psi = tot_sdr(t, sdrs)
    d_psi, _, _, _ = bpl_perturb(sdr, psi)
    tau = euler_cochain(ls, sdrs)
    twisted = twisted_boundaries(ls.base, ls.n, tau)
    for k in range(1, sdr.small.top + 1):
        assert d_psi[k] == twisted[k], f"degree {k} differs"


def test_sdr_choice_changes_values_not_periods():
    base = simplex_boundary_complex(3)
    cs = chain_system(base, block_polygon_chain([(1, 2, 3), (2, 1), (1, 1)]))
    ls = to_chain_system(cs)
    t_hodge = euler_cochain(ls)
    assert any(v != 0 for v in t_hodge.values.values())
    rng = random.Random(5)
    alt = {v: split_sdr(ls.spheres[v], rng) for v in ls.base.vertices}
    t_alt = euler_cochain(ls, alt)
    det = {v: split_sdr(ls.spheres[v]) for v in ls.base.vertices}
    t_det = euler_cochain(ls, det)
    # local values shift by a coboundary, periods agree exactly
    assert t_alt.values != t_hodge.values
    z = simplex_fundamental_cycle(base, 2)
    assert period(t_hodge, z) == period(t_alt, z) == period(t_det, z)
    assert verify_cocycle(t_alt).ok and verify_cocycle(t_det).ok


def test_coboundary_solve_exact_cochain():
    base = simplex_boundary_complex(3)
    cs = chain_system(base, polygon_chain((24, 12, 6, 3)))
    t = euler_cochain(cs)
    solvable, x = coboundary_solve(t)
    assert solvable
    # check delta x = tau explicitly
    for s in base.of_dim(2):
        val = Fraction(0)
        for i in range(3):
            val += (-1) ** i * x[s[:i] + s[i + 1:]]
        assert val == t.value(s)
