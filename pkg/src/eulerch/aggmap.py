"""Aggregation morphisms of sphere complexes and their chain maps.

An aggregation maps a finer sphere complex onto a coarser one (each source
cell lands on the target cell whose interior contains its interior). The
induced subdivision chain map sends a target k-cell to the signed sum of the
source k-cells aggregating it; the chain-map identity gamma R = R gamma pins
those signs uniquely, so they are solved for rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cellx import (
    SphereComplex,
    ValidationReport,
    order_complex,
    reverse_orientation,
)
from .errors import CompositionMismatch, NoConsistentSigns
from .ratlin import Matrix
from .simplicial import has_sphere_homology, is_acyclic

__all__ = [
    "Aggregation",
    "validate_aggregation",
    "subdivision_chain_map",
    "compose",
    "identity_aggregation",
    "same_complex",
    "make_chain",
]


@dataclass
class Aggregation:
    source: SphereComplex          # finer complex
    target: SphereComplex          # coarser complex
    cell_map: dict                 # source cell id -> target cell id
    chain_map: list | None = None  # chain_map[k]: R(target)_k -> R(source)_k

    @property
    def n(self) -> int:
        return self.source.n


def same_complex(a: SphereComplex, b: SphereComplex) -> bool:
    return a is b or (
        a.n == b.n
        and a.poset.cells == b.poset.cells
        and set(a.poset.covers) == set(b.poset.covers)
        and a.gamma[1:] == b.gamma[1:]
        and a.fund_class == b.fund_class
    )


def validate_aggregation(a: Aggregation) -> ValidationReport:
    """Combinatorial proxy checks that a poset map is a sphere aggregation."""
    checks = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        return ok

    src, tgt = a.source.poset, a.target.poset
    add("same-dimension", a.source.n == a.target.n,
        f"{a.source.n} vs {a.target.n}")
    total = set(a.cell_map) == set(src.dim_of) and all(
        t in tgt.dim_of for t in a.cell_map.values()
    )
    add("total-map", total, "" if total else "cell_map is not a total map into the target")
    if not total:
        return ValidationReport("aggregation", checks)

    order_ok = True
    msg = ""
    for f, c in src.covers:
        mf, mc = a.cell_map[f], a.cell_map[c]
        if mf != mc and mf not in tgt.below(mc):
            order_ok = False
            msg = f"cover ({f},{c}) maps to incomparable pair ({mf},{mc})"
            break
    add("order-preserving", order_ok, msg)

    dim_ok = all(
        tgt.dim_of[a.cell_map[c]] >= d for c, d in src.cells
    )
    add("dimension-nonincreasing", dim_ok,
        "" if dim_ok else "a source cell maps to a lower-dimensional target cell")

    vert_ok = True
    vmsg = ""
    preimages = {t: [] for t in tgt.cells_of_dim(0)}
    for v in src.cells_of_dim(0):
        t = a.cell_map[v]
        if t in preimages:
            preimages[t].append(v)
    for t, vs in preimages.items():
        if len(vs) != 1:
            vert_ok, vmsg = False, f"target vertex {t} has {len(vs)} source vertices"
            break
    add("vertex-bijection", vert_ok, vmsg)
    if not (order_ok and dim_ok and vert_ok):
        return ValidationReport("aggregation", checks)

    ball_ok = True
    bmsg = ""
    for c, k in tgt.cells:
        closed = {c} | tgt.below(c)
        pre = [x for x in a.cell_map if a.cell_map[x] in closed]
        sub = src.restriction(pre)
        tops = [x for x in pre if not any(y in sub.cofaces[x] for y in pre)]
        if not tops or any(src.dim_of[x] != k or a.cell_map[x] != c for x in tops):
            ball_ok, bmsg = False, f"preimage of {c} has wrong top cells"
            break
        if not is_acyclic(order_complex(sub), ring="Q"):
            ball_ok, bmsg = False, f"preimage of closed cell {c} is not acyclic"
            break
        if k >= 1:
            pre_bd = [x for x in a.cell_map if a.cell_map[x] in tgt.below(c)]
            sub_bd = src.restriction(pre_bd)
            if not has_sphere_homology(order_complex(sub_bd), k - 1, ring="Q"):
                ball_ok, bmsg = False, f"preimage of the boundary of {c} is not a {k-1}-sphere"
                break
    add("preimage-balls", ball_ok, bmsg)
    return ValidationReport("aggregation", checks)


def subdivision_chain_map(a: Aggregation, check: bool = True) -> Aggregation:
    """Solve for the chain map matrices of an aggregation.

    Degree 0 sends each target vertex to its unique source vertex with
    coefficient +1. In degree k the candidate support is the set of source
    k-cells over each target k-cell and the unknown signs are the unique
    solution of gamma x = R(boundary); entries outside {-1, +1} mean the
    input was not an aggregation of spheres.
    """
    if check:
        validate_aggregation(a).raise_if_failed()
    src, tgt = a.source, a.target
    n = src.n
    src_basis = [list(src.basis(k)) for k in range(n + 1)]
    tgt_basis = [list(tgt.basis(k)) for k in range(n + 1)]
    src_index = [{c: i for i, c in enumerate(b)} for b in src_basis]

    over = [{t: [] for t in tgt_basis[k]} for k in range(n + 1)]
    for c, t in a.cell_map.items():
        kc = src.poset.dim_of[c]
        if kc == tgt.poset.dim_of[t]:
            over[kc][t].append(c)

    chain = []
    r0 = [[0] * len(tgt_basis[0]) for _ in src_basis[0]]
    for j, t in enumerate(tgt_basis[0]):
        vs = over[0][t]
        if len(vs) != 1:
            raise NoConsistentSigns(f"target vertex {t} has {len(vs)} source vertices")
        r0[src_index[0][vs[0]]][j] = 1
    chain.append(Matrix(r0))

    for k in range(1, n + 1):
        cols = []
        for j, t in enumerate(tgt_basis[k]):
            cands = over[k][t]
            if not cands:
                raise NoConsistentSigns(f"target cell {t} has no source cells over it")
            tcol = Matrix.column(tgt.gamma[k].column_list(j))
            b = chain[k - 1] @ tcol
            cand_idx = [src_index[k][c] for c in cands]
            A = src.gamma[k].submatrix(range(len(src_basis[k - 1])), cand_idx)
            x, unique = A.solve(b)
            if x is None or not unique:
                raise NoConsistentSigns(
                    f"sign system for target cell {t} has "
                    + ("no" if x is None else "no unique") + " solution")
            col = [0] * len(src_basis[k])
            for idx, ci in enumerate(cand_idx):
                v = x[idx, 0]
                if v not in (1, -1):
                    raise NoConsistentSigns(
                        f"target cell {t}: source cell {cands[idx]} gets coefficient {v}")
                col[ci] = int(v)
            cols.append(col)
        chain.append(Matrix(cols).transpose() if cols else Matrix.zeros(len(src_basis[k]), 0))

    for k in range(1, n + 1):
        if src.gamma[k] @ chain[k] != chain[k - 1] @ tgt.gamma[k]:
            raise NoConsistentSigns(f"chain-map identity fails in degree {k}")
    if chain[n] @ tgt.i_n_col() != src.i_n_col():
        raise NoConsistentSigns(
            "chain map reverses the fundamental class; flip one orientation")
    if src.p0_row() @ chain[0] != tgt.p0_row():
        raise NoConsistentSigns("chain map is not augmentation-compatible")
    return Aggregation(src, tgt, dict(a.cell_map), chain)


def identity_aggregation(s: SphereComplex) -> Aggregation:
    cell_map = {c: c for c, _ in s.poset.cells}
    chain = [Matrix.identity(len(s.basis(k))) for k in range(s.n + 1)]
    return Aggregation(s, s, cell_map, chain)


def compose(a: Aggregation, b: Aggregation) -> Aggregation:
    """Composite aggregation; chain maps compose contravariantly."""
    if not same_complex(a.target, b.source):
        raise CompositionMismatch("middle complexes differ")
    cell_map = {c: b.cell_map[t] for c, t in a.cell_map.items()}
    chain = None
    if a.chain_map is not None and b.chain_map is not None:
        chain = [ra @ rb for ra, rb in zip(a.chain_map, b.chain_map)]
    return Aggregation(a.source, b.target, cell_map, chain)


def make_chain(spheres, cell_maps) -> list:
    """Build a composable chain of aggregations, reorienting as needed.

    spheres: list S_0 .. S_m (finest first); cell_maps[i] maps cells of S_i
    to cells of S_{i+1}. Sign solving is orientation-independent, so when a
    computed chain map reverses the fundamental class the target's
    orientation is flipped to keep the chain consistently oriented.
    """
    spheres = list(spheres)
    aggs = []
    for i, cmap in enumerate(cell_maps):
        agg = Aggregation(spheres[i], spheres[i + 1], cmap)
        try:
            agg = subdivision_chain_map(agg)
        except NoConsistentSigns as exc:
            if "fundamental class" not in str(exc):
                raise
            spheres[i + 1] = reverse_orientation(spheres[i + 1])
            agg = subdivision_chain_map(
                Aggregation(spheres[i], spheres[i + 1], cmap))
        aggs.append(agg)
    return aggs
