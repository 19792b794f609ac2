"""Generators for the standard test complexes and aggregations.

Everything here is plain data construction: polygons, boundaries of
simplices, prism boundaries, suspensions, and the polygon coarsening maps
used as the stock supply of sphere aggregations.
"""

from __future__ import annotations

from .aggmap import Aggregation, make_chain
from .cellx import CellPoset, SphereComplex, orient
from .simplicial import SimplicialComplex

__all__ = [
    "polygon_poset",
    "polygon",
    "simplex_boundary_poset",
    "simplex_boundary",
    "prism_boundary_poset",
    "prism_boundary",
    "suspension_poset",
    "suspend_sphere",
    "polygon_block_map",
    "polygon_coarsening",
    "polygon_chain",
    "block_polygon_chain",
    "suspended_chain",
    "full_simplex_complex",
    "simplex_boundary_complex",
    "simplex_fundamental_cycle",
]


def polygon_poset(m: int) -> CellPoset:
    """Circle with m vertices v0..v(m-1) and m edges ei = (vi, vi+1)."""
    if m < 2:
        raise ValueError("a polygon circle needs at least 2 vertices")
    cells = [(f"v{i}", 0) for i in range(m)] + [(f"e{i}", 1) for i in range(m)]
    covers = []
    for i in range(m):
        covers.append((f"v{i}", f"e{i}"))
        covers.append((f"v{(i + 1) % m}", f"e{i}"))
    return CellPoset(cells, covers)


def polygon(m: int) -> SphereComplex:
    return orient(polygon_poset(m), 1)


def simplex_boundary_poset(k: int) -> CellPoset:
    """Face poset of the boundary of the k-simplex (an S^(k-1))."""
    verts = list(range(k + 1))
    cells = []
    covers = []
    subsets = []
    for size in range(1, k + 1):
        from itertools import combinations
        for s in combinations(verts, size):
            subsets.append(s)
            cells.append(("s" + "".join(str(v) for v in s), size - 1))
    name = lambda s: "s" + "".join(str(v) for v in s)
    for s in subsets:
        if len(s) > 1:
            for i in range(len(s)):
                covers.append((name(s[:i] + s[i + 1:]), name(s)))
    return CellPoset(cells, covers)


def simplex_boundary(k: int) -> SphereComplex:
    return orient(simplex_boundary_poset(k), k - 1)


def prism_boundary_poset() -> CellPoset:
    """Boundary of the triangular prism (triangle x interval): a 2-sphere
    with two triangles and three squares."""
    tri = {"a": 0, "b": 0, "c": 0, "ab": 1, "bc": 1, "ca": 1, "abc": 2}
    seg = {"0": 0, "1": 0, "01": 1}
    tri_faces = {"ab": ["a", "b"], "bc": ["b", "c"], "ca": ["c", "a"],
                 "abc": ["ab", "bc", "ca"], "a": [], "b": [], "c": []}
    seg_faces = {"01": ["0", "1"], "0": [], "1": []}
    cells = []
    covers = []
    for t, dt in tri.items():
        for s, ds in seg.items():
            if t == "abc" and s == "01":
                continue  # drop the solid top cell, keep its boundary
            cells.append((f"{t}|{s}", dt + ds))
            for tf in tri_faces[t]:
                covers.append((f"{tf}|{s}", f"{t}|{s}"))
            for sf in seg_faces[s]:
                covers.append((f"{t}|{sf}", f"{t}|{s}"))
    return CellPoset(cells, covers)


def prism_boundary() -> SphereComplex:
    return orient(prism_boundary_poset(), 2)


def suspension_poset(p: CellPoset) -> CellPoset:
    """Suspension: two poles plus cones over every cell, equator kept."""
    cells = [("N", 0), ("S", 0)] + list(p.cells)
    covers = list(p.covers)
    for c, d in p.cells:
        for pole in ("N", "S"):
            cells.append((f"{pole}*{c}", d + 1))
            covers.append((c, f"{pole}*{c}"))
            for f in p.faces[c]:
                covers.append((f"{pole}*{f}", f"{pole}*{c}"))
            if d == 0:
                covers.append((pole, f"{pole}*{c}"))
    return CellPoset(cells, covers)


def suspend_sphere(s: SphereComplex) -> SphereComplex:
    return orient(suspension_poset(s.poset), s.n + 1)


def polygon_block_map(blocks) -> dict:
    """Cell map of the sum(blocks)-gon onto the len(blocks)-gon.

    Target edge j aggregates blocks[j] consecutive source edges; unequal
    blocks make the chain combinatorially asymmetric, which is what produces
    nonzero local Euler values.
    """
    cell_map = {}
    i = 0
    for j, b in enumerate(blocks):
        if b < 1:
            raise ValueError("each block must aggregate at least one edge")
        for r in range(b):
            cell_map[f"v{i}"] = f"v{j}" if r == 0 else f"e{j}"
            cell_map[f"e{i}"] = f"e{j}"
            i += 1
    return cell_map


def polygon_coarsening_map(m_src: int, m_tgt: int) -> dict:
    """Cell map of the km-gon onto the m-gon, k consecutive edges per edge."""
    if m_src % m_tgt:
        raise ValueError("source polygon size must be a multiple of the target's")
    k = m_src // m_tgt
    return polygon_block_map([k] * m_tgt)


def polygon_coarsening(src: SphereComplex, tgt: SphereComplex) -> Aggregation:
    return make_chain([src, tgt], [polygon_coarsening_map(src.w, tgt.w)])[0]


def polygon_chain(sizes) -> list:
    """Chain of polygon coarsenings, e.g. sizes = (12, 6, 3)."""
    spheres = [polygon(m) for m in sizes]
    maps = [
        polygon_coarsening_map(sizes[i], sizes[i + 1])
        for i in range(len(sizes) - 1)
    ]
    return make_chain(spheres, maps)


def block_polygon_chain(blocks_list) -> list:
    """Chain of block coarsenings, e.g. [(1, 2, 3), (2, 1)].

    blocks_list[i] aggregates the polygon of size sum(blocks_list[i]) onto
    the polygon of size len(blocks_list[i]); consecutive entries must agree
    on the intermediate sizes.
    """
    sizes = [sum(blocks_list[0])] + [len(b) for b in blocks_list]
    for b, m in zip(blocks_list[1:], sizes[1:]):
        if sum(b) != m:
            raise ValueError("block chain sizes do not match up")
    spheres = [polygon(m) for m in sizes]
    maps = [polygon_block_map(b) for b in blocks_list]
    return make_chain(spheres, maps)


def suspend_cell_map(cell_map: dict) -> dict:
    out = {"N": "N", "S": "S"}
    for c, t in cell_map.items():
        out[c] = t
        out[f"N*{c}"] = f"N*{t}"
        out[f"S*{c}"] = f"S*{t}"
    return out


def suspended_chain(chain) -> list:
    """Suspend a chain of aggregations degree by degree (n -> n+1)."""
    spheres = [chain[0].source] + [a.target for a in chain]
    susp = [suspend_sphere(s) for s in spheres]
    maps = [suspend_cell_map(a.cell_map) for a in chain]
    return make_chain(susp, maps)


# -- simplicial bases ----------------------------------------------------


def full_simplex_complex(k: int) -> SimplicialComplex:
    """The full k-simplex on vertices 0..k."""
    return SimplicialComplex([str(i) for i in range(k + 1)],
                             [[str(i) for i in range(k + 1)]])


def simplex_boundary_complex(k: int) -> SimplicialComplex:
    """The boundary of the k-simplex as a simplicial complex."""
    verts = [str(i) for i in range(k + 1)]
    return SimplicialComplex(
        verts,
        [verts[:i] + verts[i + 1:] for i in range(k + 1)],
    )


def simplex_fundamental_cycle(cx: SimplicialComplex, k: int) -> dict:
    """Fundamental cycle of the boundary-of-simplex complex of dimension k."""
    top = tuple(range(k + 2))
    return {
        top[:i] + top[i + 1:]: (-1) ** i for i in range(k + 2)
    }
