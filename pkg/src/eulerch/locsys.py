"""Local systems of sphere chain complexes on a simplicial base.

A cell-valued system assigns a sphere complex to every base vertex and an
aggregation to every ordered edge (fibers coarsen along the global vertex
order); strict functoriality is required on 2-simplices. The chain-valued
system stores the induced subdivision chain maps L(v0, v1): R(v1) -> R(v0),
and the total complex assembles base chains with these coefficients:

    horizontal  d(sigma c) = sum_i (-1)^i (d_i sigma) c
                             + (-1)^p (d_p sigma) L(v_{p-1}, v_p)(c)
    vertical    (-1)^p sigma gamma(c)

Both differentials square to zero, anticommute, and their sum computes the
homology of the total space of the encoded bundle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aggmap import Aggregation, compose, same_complex, subdivision_chain_map
from .cellx import SphereComplex, reverse_orientation
from .errors import FunctorialityBroken, InvalidComplex
from .hodge import GradedComplex, GradedSDR, SdrData
from .ratlin import Matrix, betti_numbers, block_matrix
from .simplicial import SimplicialComplex, homology_from_boundaries

__all__ = [
    "CellLocalSystem",
    "ChainLocalSystem",
    "HomologyDescription",
    "build_cell_system",
    "constant_system",
    "chain_system",
    "to_chain_system",
    "TotalComplex",
    "total_complex",
    "total_homology",
    "trivial_tensor_dims",
    "tot_sdr",
]


@dataclass
class CellLocalSystem:
    base: SimplicialComplex
    fibers: dict          # vertex id -> SphereComplex
    transitions: dict     # (v0 id, v1 id) -> Aggregation, fiber(v0) -> fiber(v1)

    @property
    def n(self) -> int:
        return next(iter(self.fibers.values())).n


@dataclass
class ChainLocalSystem:
    base: SimplicialComplex
    n: int
    spheres: dict         # vertex id -> SphereComplex
    maps: dict            # (v0 id, v1 id) -> [Matrix per degree], R(v1) -> R(v0)

    def fiber_dims(self, v):
        return self.spheres[v].dims()

    def edge_map(self, v0, v1, q) -> Matrix:
        return self.maps[(v0, v1)][q]


def _base_edges(base: SimplicialComplex):
    return [tuple(base.simplex_ids(e)) for e in base.of_dim(1)]


def build_cell_system(base: SimplicialComplex, fibers: dict, cell_maps: dict) -> CellLocalSystem:
    """Assemble a cell local system, reorienting fibers consistently.

    cell_maps[(v0, v1)] maps cells of fiber(v0) to cells of fiber(v1) for
    every base edge. Chain-map sign solving is orientation independent, so
    fiber fundamental classes are flipped along a spanning tree wherever a
    transition would reverse them; a non-tree edge that still reverses means
    the system is not consistently orientable.
    """
    fibers = dict(fibers)
    edges = _base_edges(base)
    neighbors = {}
    for v0, v1 in edges:
        neighbors.setdefault(v0, []).append(v1)
        neighbors.setdefault(v1, []).append(v0)
    fixed = set()
    for root in base.vertices:
        if root in fixed or root not in fibers:
            continue
        fixed.add(root)
        queue = [root]
        while queue:
            u = queue.pop(0)
            for x in neighbors.get(u, ()):
                if x in fixed:
                    continue
                v0, v1 = (u, x) if (u, x) in cell_maps else (x, u)
                agg = subdivision_chain_map(
                    Aggregation(fibers[v0], fibers[v1], cell_maps[(v0, v1)]),
                    check=False)
                want = agg.chain_map[agg.n] @ fibers[v1].i_n_col()
                if want != fibers[v0].i_n_col():
                    fibers[x] = reverse_orientation(fibers[x])
                fixed.add(x)
                queue.append(x)
    transitions = {}
    for v0, v1 in edges:
        try:
            transitions[(v0, v1)] = subdivision_chain_map(
                Aggregation(fibers[v0], fibers[v1], cell_maps[(v0, v1)]))
        except Exception as exc:
            raise InvalidComplex(
                f"transition ({v0},{v1}) is not a valid aggregation: {exc}") from exc
    cs = CellLocalSystem(base, fibers, transitions)
    _check_cell_functoriality(cs)
    return cs


def _check_cell_functoriality(cs: CellLocalSystem):
    base = cs.base
    for t in base.of_dim(2):
        v0, v1, v2 = base.simplex_ids(t)
        m01 = cs.transitions[(v0, v1)].cell_map
        m12 = cs.transitions[(v1, v2)].cell_map
        m02 = cs.transitions[(v0, v2)].cell_map
        for c, mid in m01.items():
            if m12[mid] != m02[c]:
                raise FunctorialityBroken(
                    f"2-simplex ({v0},{v1},{v2}): cell maps do not compose at {c}")


def constant_system(base: SimplicialComplex, fiber: SphereComplex) -> CellLocalSystem:
    identity = {c: c for c, _ in fiber.poset.cells}
    cell_maps = {e: identity for e in _base_edges(base)}
    return build_cell_system(base, {v: fiber for v in base.vertices}, cell_maps)


def chain_system(base: SimplicialComplex, chain: list) -> CellLocalSystem:
    """System on a base whose ordered vertices carry a chain of aggregations.

    The k-th vertex gets the k-th complex of the chain; the edge (v_i, v_j)
    carries the composite aggregation, so functoriality is strict by
    construction. The base must have exactly len(chain) + 1 vertices.
    """
    verts = list(base.vertices)
    if len(verts) != len(chain) + 1:
        raise ValueError("base vertex count does not match the chain length")
    for a, b in zip(chain, chain[1:]):
        if not same_complex(a.target, b.source):
            raise InvalidComplex("aggregation chain does not link up")
    fibers = {verts[0]: chain[0].source}
    for k, agg in enumerate(chain):
        fibers[verts[k + 1]] = agg.target
    composites = {}
    for i in range(len(verts)):
        acc = None
        for j in range(i + 1, len(verts)):
            acc = chain[j - 1] if acc is None else compose(acc, chain[j - 1])
            composites[(verts[i], verts[j])] = acc
    transitions = {e: composites[e] for e in _base_edges(base)}
    cs = CellLocalSystem(base, fibers, transitions)
    _check_cell_functoriality(cs)
    return cs


def to_chain_system(cs: CellLocalSystem) -> ChainLocalSystem:
    """Chain-level system; re-verifies functoriality at the matrix level."""
    n = cs.n
    maps = {}
    for (v0, v1), agg in cs.transitions.items():
        if agg.chain_map is None:
            agg = subdivision_chain_map(agg)
        if not same_complex(agg.source, cs.fibers[v0]) or not same_complex(agg.target, cs.fibers[v1]):
            raise InvalidComplex(f"transition ({v0},{v1}) does not match its fibers")
        maps[(v0, v1)] = list(agg.chain_map)
    for t in cs.base.of_dim(2):
        v0, v1, v2 = cs.base.simplex_ids(t)
        for q in range(n + 1):
            if maps[(v0, v1)][q] @ maps[(v1, v2)][q] != maps[(v0, v2)][q]:
                raise FunctorialityBroken(
                    f"2-simplex ({v0},{v1},{v2}): chain maps do not compose in degree {q}")
    return ChainLocalSystem(cs.base, n, dict(cs.fibers), maps)


# -- the total complex ---------------------------------------------------


@dataclass
class HomologyDescription:
    betti: list
    torsion: list   # torsion[k] lists coefficients > 1 (empty over Q)


class TotalComplex:
    """Bigraded module C_p(B; L_q) with horizontal and vertical differentials."""

    def __init__(self, ls: ChainLocalSystem):
        self.ls = ls
        base = ls.base
        n = ls.n
        self.n = n
        self.P = base.dim
        self.basis = {}
        self.dims = {}
        for p in range(self.P + 1):
            for q in range(n + 1):
                b = []
                for sigma in base.of_dim(p):
                    v_last = base.vertices[sigma[-1]]
                    b.extend((sigma, c) for c in range(ls.fiber_dims(v_last)[q]))
                self.basis[(p, q)] = b
                self.dims[(p, q)] = len(b)
        self.horiz = {}
        self.vert = {}
        for p in range(self.P + 1):
            for q in range(n + 1):
                self.horiz[(p, q)] = self._build_horiz(p, q)
                self.vert[(p, q)] = self._build_vert(p, q)
        self._assert_identities()

    def _offsets(self, p, q):
        base = self.ls.base
        off = {}
        pos = 0
        for sigma in base.of_dim(p):
            off[sigma] = pos
            v_last = base.vertices[sigma[-1]]
            pos += self.ls.fiber_dims(v_last)[q]
        return off

    def _build_horiz(self, p, q) -> Matrix:
        rows = self.dims.get((p - 1, q), 0)
        cols = self.dims[(p, q)]
        if p == 0 or rows == 0 or cols == 0:
            return Matrix.zeros(self.dims.get((p - 1, q), 0), cols)
        base = self.ls.base
        row_off = self._offsets(p - 1, q)
        grid = [[0] * cols for _ in range(rows)]
        col = 0
        for sigma in base.of_dim(p):
            v_last = base.vertices[sigma[-1]]
            fdim = self.ls.fiber_dims(v_last)[q]
            for i in range(p):
                face = sigma[:i] + sigma[i + 1:]
                sign = (-1) ** i
                r0 = row_off[face]
                for c in range(fdim):
                    grid[r0 + c][col + c] += sign
            face = sigma[:-1]
            v_prev = base.vertices[sigma[-2]]
            L = self.ls.edge_map(v_prev, v_last, q)
            sign = (-1) ** p
            r0 = row_off[face]
            for c in range(fdim):
                for r in range(L.rows):
                    v = L[r, c]
                    if v:
                        grid[r0 + r][col + c] += sign * v
            col += fdim
        return Matrix(grid)

    def _build_vert(self, p, q) -> Matrix:
        cols = self.dims[(p, q)]
        rows = self.dims.get((p, q - 1), 0)
        if q == 0 or rows == 0 or cols == 0:
            return Matrix.zeros(rows, cols)
        base = self.ls.base
        grid = [[0] * cols for _ in range(rows)]
        col = 0
        row = 0
        for sigma in base.of_dim(p):
            v_last = base.vertices[sigma[-1]]
            g = self.ls.spheres[v_last].gamma[q]
            sign = (-1) ** p
            for c in range(g.cols):
                for r in range(g.rows):
                    v = g[r, c]
                    if v:
                        grid[row + r][col + c] = sign * v
            col += g.cols
            row += g.rows
        return Matrix(grid)

    def _assert_identities(self):
        for p in range(self.P + 1):
            for q in range(self.n + 1):
                h = self.horiz[(p, q)]
                v = self.vert[(p, q)]
                if p >= 2:
                    assert (self.horiz[(p - 1, q)] @ h).is_zero(), "horizontal d^2 != 0"
                if q >= 2:
                    assert (self.vert[(p, q - 1)] @ v).is_zero(), "vertical d^2 != 0"
                if p >= 1 and q >= 1:
                    anti = self.vert[(p - 1, q)] @ h + self.horiz[(p, q - 1)] @ v
                    assert anti.is_zero(), "differentials do not anticommute"
        for d in range(1, self.P + self.n + 1):
            if not (self.total_boundary(d - 1) @ self.total_boundary(d)).is_zero():
                raise AssertionError("total differential does not square to zero")

    def bidegrees(self, d):
        """Bidegrees (p, q) with p + q = d, p ascending."""
        return [(p, d - p) for p in range(max(0, d - self.n), min(self.P, d) + 1)]

    def total_dims(self):
        return [
            sum(self.dims[pq] for pq in self.bidegrees(d))
            for d in range(self.P + self.n + 1)
        ]

    def total_boundary(self, d: int) -> Matrix:
        """Assembled total differential from degree d to degree d-1."""
        src = self.bidegrees(d)
        tgt = self.bidegrees(d - 1)
        tgt_pos = {pq: i for i, pq in enumerate(tgt)}
        blocks = {}
        for j, (p, q) in enumerate(src):
            if (p - 1, q) in tgt_pos:
                blocks[(tgt_pos[(p - 1, q)], j)] = self.horiz[(p, q)]
            if (p, q - 1) in tgt_pos:
                blocks[(tgt_pos[(p, q - 1)], j)] = self.vert[(p, q)]
        return block_matrix(
            [self.dims[pq] for pq in tgt],
            [self.dims[pq] for pq in src],
            blocks,
        )

    def vertical_boundary(self, d: int) -> Matrix:
        """Vertical-only differential, same grading and block layout."""
        src = self.bidegrees(d)
        tgt = self.bidegrees(d - 1)
        tgt_pos = {pq: i for i, pq in enumerate(tgt)}
        blocks = {}
        for j, (p, q) in enumerate(src):
            if (p, q - 1) in tgt_pos:
                blocks[(tgt_pos[(p, q - 1)], j)] = self.vert[(p, q)]
        return block_matrix(
            [self.dims[pq] for pq in tgt],
            [self.dims[pq] for pq in src],
            blocks,
        )

    def horizontal_boundary(self, d: int) -> Matrix:
        src = self.bidegrees(d)
        tgt = self.bidegrees(d - 1)
        tgt_pos = {pq: i for i, pq in enumerate(tgt)}
        blocks = {}
        for j, (p, q) in enumerate(src):
            if (p - 1, q) in tgt_pos:
                blocks[(tgt_pos[(p - 1, q)], j)] = self.horiz[(p, q)]
        return block_matrix(
            [self.dims[pq] for pq in tgt],
            [self.dims[pq] for pq in src],
            blocks,
        )

    def euler_characteristic(self):
        return sum(
            (-1) ** d * dim for d, dim in enumerate(self.total_dims())
        )


def total_complex(ls) -> TotalComplex:
    if isinstance(ls, CellLocalSystem):
        ls = to_chain_system(ls)
    return TotalComplex(ls)


def total_homology(t: TotalComplex, coefficients: str = "Q") -> HomologyDescription:
    dims = t.total_dims()
    top = len(dims) - 1
    boundaries = [None] + [t.total_boundary(d) for d in range(1, top + 1)]
    if coefficients == "Q":
        return HomologyDescription(betti_numbers(dims, boundaries), [[] for _ in dims])
    if coefficients != "Z":
        raise ValueError("coefficients must be 'Q' or 'Z'")
    for b in boundaries[1:]:
        if not b.is_integral():
            raise InvalidComplex("total differential is not integral")
    betti, torsion = homology_from_boundaries(dims, boundaries)
    return HomologyDescription(betti, torsion)


# -- trivial coefficients and the SDR onto them ---------------------------


def trivial_tensor_dims(base: SimplicialComplex, n: int):
    """Dims of C(B) tensor H(S^n): an h0 block and an hn block per degree."""
    top = base.dim + n
    dims = []
    for d in range(top + 1):
        d0 = len(base.of_dim(d))
        dn = len(base.of_dim(d - n)) if d - n >= 0 else 0
        dims.append(d0 + dn)
    return dims


def tot_sdr(t: TotalComplex, sdrs: dict):
    """Blockwise SDR of the vertical-only total complex onto C(B) x H(S^n).

    sdrs maps each base vertex id to a verified SdrData for its fiber. The
    block homotopy over a p-simplex is twisted by (-1)^p to match the twisted
    vertical differential. Returns (GradedSDR, psi) where psi is the
    horizontal differential, ready for the perturbation lemma.
    """
    ls = t.ls
    base = ls.base
    n = t.n
    top = t.P + n
    big = GradedComplex(
        dims=t.total_dims(),
        d={d: t.vertical_boundary(d) for d in range(1, top + 1)},
    )
    small = GradedComplex(dims=trivial_tensor_dims(base, n), d={})

    i_blocks = {}
    p_blocks = {}
    F_blocks = {}
    for d in range(top + 1):
        rows_big = big.dims[d]
        cols_small = small.dims[d]
        i_m = [[0] * cols_small for _ in range(rows_big)] if rows_big else []
        p_m = [[0] * rows_big for _ in range(cols_small)] if cols_small else []
        # big side offsets per bidegree block
        src = t.bidegrees(d)
        big_off = {}
        pos = 0
        for pq in src:
            big_off[pq] = pos
            pos += t.dims[pq]
        # small side: h0 block (p = d), then hn block (p = d - n)
        col = 0
        if (d, 0) in t.dims:
            off0 = big_off.get((d, 0))
            pos0 = off0
            for sigma in base.of_dim(d):
                v = base.vertices[sigma[-1]]
                sdr = sdrs[v]
                w = sdr.i0.rows
                for r in range(w):
                    if sdr.i0[r, 0]:
                        i_m[pos0 + r][col] = sdr.i0[r, 0]
                    if sdr.p0[0, r]:
                        p_m[col][pos0 + r] = sdr.p0[0, r]
                pos0 += w
                col += 1
        if d - n >= 0 and (d - n, n) in t.dims:
            offn = big_off.get((d - n, n))
            posn = offn
            for sigma in base.of_dim(d - n):
                v = base.vertices[sigma[-1]]
                sdr = sdrs[v]
                f = sdr.i_n.rows
                for r in range(f):
                    if sdr.i_n[r, 0]:
                        i_m[posn + r][col] = sdr.i_n[r, 0]
                    if sdr.p_n[0, r]:
                        p_m[col][posn + r] = sdr.p_n[0, r]
                posn += f
                col += 1
        i_blocks[d] = Matrix(i_m, shape=(rows_big, cols_small)) if rows_big else Matrix.zeros(0, cols_small)
        p_blocks[d] = Matrix(p_m, shape=(cols_small, rows_big)) if cols_small else Matrix.zeros(0, rows_big)

        # homotopy: block diagonal (-1)^p F_{q+1} within each p-column
        if d + 1 <= top:
            rows_next = big.dims[d + 1]
            F_m = [[0] * rows_big for _ in range(rows_next)] if rows_next else []
            tgt = t.bidegrees(d + 1)
            next_off = {}
            pos = 0
            for pq in tgt:
                next_off[pq] = pos
                pos += t.dims[pq]
            for (p, q) in src:
                if (p, q + 1) not in next_off:
                    continue
                c0 = big_off[(p, q)]
                r0 = next_off[(p, q + 1)]
                sign = (-1) ** p
                for sigma in base.of_dim(p):
                    v = base.vertices[sigma[-1]]
                    sdr = sdrs[v]
                    Fq = sdr.F[q + 1]
                    for c in range(Fq.cols):
                        for r in range(Fq.rows):
                            val = Fq[r, c]
                            if val:
                                F_m[r0 + r][c0 + c] = sign * val
                    c0 += Fq.cols
                    r0 += Fq.rows
            F_blocks[d] = Matrix(F_m, shape=(rows_next, rows_big)) if rows_next else Matrix.zeros(0, rows_big)

    sdr = GradedSDR(big=big, small=small, i=i_blocks, p=p_blocks, F=F_blocks)
    psi = {d: t.horizontal_boundary(d) for d in range(1, top + 1)}
    return sdr, psi
