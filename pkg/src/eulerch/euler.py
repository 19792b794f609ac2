"""The local Euler cocycle of a chain of sphere aggregations.

The local value attached to a composable chain S_0 -> S_1 -> ... -> S_{n+1}
is the scalar

    p_n R(0,1) F R(1,2) F ... F R(n, n+1) i_0

read right to left: start with the degree-0 harmonic generator of the last
complex, alternately pull back along subdivision chain maps and raise degree
with the splitting homotopies, and pair the resulting degree-n chain of the
first complex against its fundamental class. With the Hodge splittings this
is a combinatorial invariant of the chain; over a simplicial base the values
on stalk chains of a local system form a cocycle whose periods on integer
cycles are the Euler numbers of the encoded sphere bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .aggmap import same_complex
from .cellx import ValidationReport
from .errors import NotACycle, NotComposable, NotSquareZero
from .hodge import GradedComplex, SdrData, build_sdr
from .locsys import (
    CellLocalSystem,
    ChainLocalSystem,
    to_chain_system,
    trivial_tensor_dims,
)
from .ratlin import Matrix
from .simplicial import SimplicialComplex, boundary_of_chain

__all__ = [
    "TwistingCochain",
    "euler_local",
    "formal_euler",
    "euler_cochain",
    "verify_cocycle",
    "period",
    "twisted_complex",
    "twisted_boundaries",
    "coboundary_solve",
]


@dataclass
class TwistingCochain:
    """Scalar values on the (n+1)-simplices of the base.

    Hom^n(H(S^n), H(S^n)) is the line sending the degree-0 unit to the
    degree-n unit, so the single nonzero component of the twisting cochain is
    recorded as one exact rational per (n+1)-simplex.
    """
    base: SimplicialComplex
    n: int
    values: dict      # simplex index tuple -> Fraction

    def value(self, simplex) -> Fraction:
        return self.values.get(tuple(simplex), Fraction(0))


def _as_scalar(m: Matrix) -> Fraction:
    assert m.shape == (1, 1)
    v = m[0, 0]
    return v if isinstance(v, Fraction) else Fraction(v)


def euler_local(chain, sdrs=None) -> Fraction:
    """Local Euler value of a composable chain of n+1 sphere aggregations.

    sdrs may supply a prebuilt SdrData per complex (keyed by id of the
    complex object); by default the Hodge splittings are built on demand.
    """
    if not chain:
        raise NotComposable("empty chain")
    n = chain[0].n
    if len(chain) != n + 1:
        raise NotComposable(f"need {n + 1} aggregations for n = {n}, got {len(chain)}")
    for a, b in zip(chain, chain[1:]):
        if not same_complex(a.target, b.source):
            raise NotComposable("chain does not link up source-to-target")
    cache = {} if sdrs is None else dict(sdrs)

    def sdr_of(s) -> SdrData:
        key = id(s)
        if key not in cache:
            cache[key] = build_sdr(s)
        return cache[key]

    spheres = [chain[0].source] + [a.target for a in chain]
    x = sdr_of(spheres[n + 1]).i0
    x = chain[n].chain_map[0] @ x
    deg = 0
    for k in range(n, 0, -1):
        x = sdr_of(spheres[k]).F[deg + 1] @ x
        deg += 1
        x = chain[k - 1].chain_map[deg] @ x
    return _as_scalar(sdr_of(spheres[0]).p_n @ x)


def formal_euler(ls: ChainLocalSystem, sdrs: dict, simplex) -> Fraction:
    """Euler value of one (n+1)-simplex stalk with arbitrary verified SDRs.

    sdrs maps base vertex ids to SdrData; with the Hodge splittings this
    specializes to euler_local on the stalk chain of aggregations.
    """
    n = ls.n
    simplex = tuple(simplex)
    if len(simplex) != n + 2:
        raise ValueError(f"expected an {n + 1}-simplex, got {simplex}")
    ids = [ls.base.vertices[i] for i in simplex]
    x = sdrs[ids[n + 1]].i0
    x = ls.edge_map(ids[n], ids[n + 1], 0) @ x
    deg = 0
    for k in range(n, 0, -1):
        x = sdrs[ids[k]].F[deg + 1] @ x
        deg += 1
        x = ls.edge_map(ids[k - 1], ids[k], deg) @ x
    return _as_scalar(sdrs[ids[0]].p_n @ x)


def hodge_sdrs(ls: ChainLocalSystem) -> dict:
    """Hodge splitting per base vertex."""
    return {v: build_sdr(ls.spheres[v]) for v in ls.base.vertices}


def euler_cochain(ls, sdrs: dict | None = None) -> TwistingCochain:
    """The twisting cochain: one local value per (n+1)-simplex of the base."""
    if isinstance(ls, CellLocalSystem):
        ls = to_chain_system(ls)
    n = ls.n
    if sdrs is None:
        sdrs = hodge_sdrs(ls)
    values = {
        s: formal_euler(ls, sdrs, s) for s in ls.base.of_dim(n + 1)
    }
    return TwistingCochain(ls.base, n, values)


def verify_cocycle(t: TwistingCochain) -> ValidationReport:
    """delta tau = 0: the alternating face sum vanishes on (n+2)-simplices."""
    checks = []
    base = t.base
    for s in base.of_dim(t.n + 2):
        total = Fraction(0)
        for i in range(len(s)):
            total += (-1) ** i * t.value(s[:i] + s[i + 1:])
        ok = total == 0
        checks.append(
            (f"delta tau = 0 on {base.simplex_ids(s)}", ok,
             "" if ok else f"sum = {total}"))
    if not checks:
        checks.append(("no (n+2)-simplices", True, ""))
    return ValidationReport("cocycle", checks)


def period(t: TwistingCochain, cycle: dict) -> Fraction:
    """Evaluate the cochain on an integer (n+1)-cycle of the base.

    cycle maps simplex index tuples to integer coefficients; its simplicial
    boundary must vanish exactly.
    """
    for s, c in cycle.items():
        if int(c) != c:
            raise NotACycle(f"coefficient of {s} is not an integer")
        if len(s) != t.n + 2:
            raise NotACycle(f"{s} is not an (n+1)-simplex")
    bd = boundary_of_chain(t.base, cycle)
    if bd:
        raise NotACycle(f"boundary has {len(bd)} nonzero faces")
    total = Fraction(0)
    for s, c in cycle.items():
        total += c * t.value(s)
    return total


def twisted_boundaries(base: SimplicialComplex, n: int, t: TwistingCochain) -> dict:
    """Boundary matrices of C(B) x H(S^n) twisted by the cochain.

    Degree d holds the h0 block C_d(B) followed by the hn block C_{d-n}(B).
    On the h0 block the differential adds the cap term: a p-simplex maps to
    (-1)^(p-n) tau(last n+2 vertices) times its front (p-n-1)-face in the hn
    block. The hn block carries the plain simplicial boundary.
    """
    dims = trivial_tensor_dims(base, n)
    top = len(dims) - 1
    out = {}
    for d in range(1, top + 1):
        rows, cols = dims[d - 1], dims[d]
        grid = [[0] * cols for _ in range(rows)]
        d0 = len(base.of_dim(d))
        r0 = len(base.of_dim(d - 1))
        bnd = base.boundary_matrix(d) if d <= base.dim else None
        if bnd is not None:
            for j in range(bnd.cols):
                for i in range(bnd.rows):
                    v = bnd[i, j]
                    if v:
                        grid[i][j] = v
        bnd_n = base.boundary_matrix(d - n) if 0 < d - n <= base.dim else None
        if bnd_n is not None:
            for j in range(bnd_n.cols):
                for i in range(bnd_n.rows):
                    v = bnd_n[i, j]
                    if v:
                        grid[r0 + i][d0 + j] = v
        p = d
        if p >= n + 1 and p <= base.dim:
            front_dim = p - n - 1
            front_index = {s: i for i, s in enumerate(base.of_dim(front_dim))}
            sign = (-1) ** (p - n)
            for j, s in enumerate(base.of_dim(p)):
                back = s[p - n - 1:]
                tau = t.value(back)
                if tau:
                    front = s[:p - n]
                    grid[r0 + front_index[front]][j] = sign * tau
        out[d] = Matrix(grid, shape=(rows, cols)) if rows else Matrix.zeros(0, cols)
    return out


def twisted_complex(ls, t: TwistingCochain) -> GradedComplex:
    """C(B) x H(S^n) with the differential deformed by the cochain."""
    if isinstance(ls, CellLocalSystem):
        ls = to_chain_system(ls)
    verify_cocycle(t).raise_if_failed(NotSquareZero)
    base = ls.base
    n = ls.n
    cx = GradedComplex(dims=trivial_tensor_dims(base, n),
                       d=twisted_boundaries(base, n, t))
    if not cx.check_square_zero():
        raise NotSquareZero("twisted differential does not square to zero")
    return cx


def coboundary_solve(t: TwistingCochain):
    """Try to solve delta x = tau over Q with x a cochain on n-simplices.

    Returns (solvable, x) where x maps n-simplex index tuples to rationals.
    """
    base = t.base
    n = t.n
    rows = base.of_dim(n + 1)
    cols = base.of_dim(n)
    if not rows:
        return True, {}
    A = base.boundary_matrix(n + 1).transpose()
    b = Matrix.column([t.value(s) for s in rows])
    x, _ = A.solve(b)
    if x is None:
        return False, None
    return True, {s: x[i, 0] for i, s in enumerate(cols)}
