"""Ingestion of triangulated sphere bundles.

A bundle triangulation is a simplicial surjection from a total complex onto a
base such that every total simplex maps onto a face of the base. The stalk
over a base simplex is a prism complex: its cells are the total simplices
mapping onto that simplex, graded by dimension drop. Moving into a face of
the base shrinks the prism factors over the deleted vertices; the opposites
of these degeneration maps are aggregations of the dual prism complexes,
which yields a cell local system on the first derived subdivision of the
base. Integrating the resulting cocycle over the subdivision of a base
simplex recovers a simplicial local formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cellx import CellPoset, ValidationReport, orient, validate_sphere
from .errors import InvalidComplex, NotASphere
from .euler import TwistingCochain, euler_cochain
from .locsys import CellLocalSystem, build_cell_system
from .simplicial import (
    SimplicialComplex,
    barycentric,
    sd_vertex_id,
    subdivide_chain,
)

__all__ = [
    "SimplicialBundle",
    "validate_bundle",
    "fiber_complex",
    "degeneration",
    "cellular_system",
    "barycentric",
    "bundle_cochain",
    "simplicial_formula",
    "product_circle_bundle",
    "twisted_tetra_bundle",
    "hopf_bundle",
]


@dataclass
class SimplicialBundle:
    total: SimplicialComplex
    base: SimplicialComplex
    vertex_map: dict    # total vertex id -> base vertex id

    @property
    def n(self) -> int:
        return self.total.dim - self.base.dim

    def base_image(self, simplex) -> tuple:
        """Base simplex hit by a total simplex (as a base index tuple)."""
        ids = {self.vertex_map[v] for v in self.total.simplex_ids(simplex)}
        return tuple(sorted(self.base.vertex_index[v] for v in ids))


def validate_bundle(b: SimplicialBundle) -> ValidationReport:
    """Simpliciality plus per-stalk homological sphericity."""
    checks = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        return ok

    mapped = set(b.vertex_map) == set(b.total.vertices) and all(
        v in b.base.vertex_index for v in b.vertex_map.values()
    )
    add("vertex-map", mapped, "" if mapped else "vertex map is not total")
    if not mapped:
        return ValidationReport("bundle", checks)

    simplicial = True
    msg = ""
    top = b.total.dim
    for s in b.total.of_dim(top):
        img = b.base_image(s)
        if img not in b.base._index.get(len(img) - 1, {}):
            simplicial, msg = False, f"simplex {b.total.simplex_ids(s)} maps outside the base"
            break
    add("simplicial", simplicial, msg)
    n = b.n
    add("fiber-dimension", n >= 1, f"fiber dimension {n} < 1")
    if not (simplicial and n >= 1):
        return ValidationReport("bundle", checks)

    for k in sorted(b.base.simplices):
        for s in b.base.of_dim(k):
            try:
                poset = fiber_complex(b, s, validate=False)
            except InvalidComplex as exc:
                add(f"stalk {b.base.simplex_ids(s)}", False, str(exc))
                continue
            rep = validate_sphere(poset, n)
            add(f"stalk {'.'.join(str(v) for v in b.base.simplex_ids(s))}",
                rep.ok, rep.first_failure() or "")
    return ValidationReport("bundle", checks)


def fiber_complex(b: SimplicialBundle, sigma, validate: bool = True) -> CellPoset:
    """Prism complex over a base simplex: total simplices mapping onto it.

    Cells are graded by dimension drop; the covering relation is the face
    relation among onto simplices. Raises NotASphere when the homological
    sphere checks fail.
    """
    sigma = tuple(sigma)
    k = len(sigma) - 1
    members = []
    for d in sorted(b.total.simplices):
        for s in b.total.of_dim(d):
            if b.base_image(s) == sigma:
                members.append(s)
    if not members:
        raise InvalidComplex(f"no total simplices over base simplex {sigma}")
    name = {s: ".".join(str(v) for v in b.total.simplex_ids(s)) for s in members}
    member_set = set(members)
    cells = [(name[s], len(s) - 1 - k) for s in members]
    covers = []
    for s in members:
        if len(s) - 1 - k >= 1:
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                if f in member_set:
                    covers.append((name[f], name[s]))
    poset = CellPoset(sorted(cells, key=lambda cd: (cd[1], cd[0])), covers)
    if validate:
        rep = validate_sphere(poset, b.n)
        if not rep.ok:
            raise NotASphere(f"stalk over {sigma}: {rep.first_failure()}")
    return poset


def degeneration(b: SimplicialBundle, sigma, face) -> dict:
    """Poset map P(sigma) -> P(face): keep the vertices over the face.

    face may be any proper face of sigma; restricting vertex sets is
    strictly functorial under composition of face inclusions.
    """
    sigma, face = tuple(sigma), tuple(face)
    if not set(face) < set(sigma):
        raise ValueError("face must be a proper face of sigma")
    face_base_ids = {b.base.vertices[i] for i in face}
    out = {}
    for d in sorted(b.total.simplices):
        for s in b.total.of_dim(d):
            if b.base_image(s) != sigma:
                continue
            sub = tuple(v for v in s
                        if b.vertex_map[b.total.vertices[v]] in face_base_ids)
            out[".".join(str(v) for v in b.total.simplex_ids(s))] = \
                ".".join(str(v) for v in b.total.simplex_ids(sub))
    return out


def _dual_poset(p: CellPoset, n: int) -> CellPoset:
    cells = [(c, n - d) for c, d in sorted(p.cells, key=lambda cd: (n - cd[1], p.index[cd[0]][1]))]
    covers = [(c, f) for f, c in p.covers]
    return CellPoset(cells, covers)


def cellular_system(b: SimplicialBundle) -> CellLocalSystem:
    """The canonical cell local system on the derived subdivision of the base.

    The fiber at a barycenter is the dual of the prism complex over its
    simplex; the transition along a flag edge is the opposite of the
    degeneration map, solved into a subdivision chain map. Strict
    functoriality and per-edge aggregation validity are verified.
    """
    n = b.n
    sd = barycentric(b.base)
    fibers = {}
    posets = {}
    for k in sorted(b.base.simplices):
        for s in b.base.of_dim(k):
            poset = fiber_complex(b, s)
            vid = sd_vertex_id(b.base, s)
            posets[vid] = poset
            fibers[vid] = orient(_dual_poset(poset, n), n)
    cell_maps = {}
    for e in sd.of_dim(1):
        v_big, v_small = sd.simplex_ids(e)
        sigma = _sd_simplex_of(b.base, v_big)
        face = _sd_simplex_of(b.base, v_small)
        cell_maps[(v_big, v_small)] = degeneration(b, sigma, face)
    return build_cell_system(sd, fibers, cell_maps)


def _sd_simplex_of(base: SimplicialComplex, sd_vertex: str) -> tuple:
    ids = sd_vertex.split(".")
    return base.simplex_from_ids(ids)


def bundle_cochain(b: SimplicialBundle):
    """(cellular system on Sd(base), euler cochain of that system)."""
    cs = cellular_system(b)
    return cs, euler_cochain(cs)


def simplicial_formula(b: SimplicialBundle, sigma, cochain: TwistingCochain | None = None) -> Fraction:
    """Integrate the aggregation cocycle over the subdivision of one simplex.

    The result is a simplicial local formula on the base: summed over the
    top simplices of a closed oriented base it equals the period of the
    cochain on the subdivided fundamental cycle.
    """
    sigma = tuple(sigma)
    if len(sigma) - 1 != b.n + 1:
        raise ValueError(f"expected an {b.n + 1}-simplex of the base")
    if cochain is None:
        _, cochain = bundle_cochain(b)
    sd = cochain.base
    pieces = subdivide_chain(b.base, sd, {sigma: 1})
    total = Fraction(0)
    for flag, sign in pieces.items():
        total += sign * cochain.value(flag)
    return total


# -- bundle generators ----------------------------------------------------


def _fiber_vertex(v, t, m):
    return f"{v}^{t % m}"


def product_circle_bundle(base: SimplicialComplex, m: int = 3) -> SimplicialBundle:
    """The product bundle base x (m-gon circle), staircase triangulation."""
    if m < 3:
        raise ValueError("a simplicial circle fiber needs at least 3 vertices")
    verts = [_fiber_vertex(v, t, m) for v in base.vertices for t in range(m)]
    vertex_map = {_fiber_vertex(v, t, m): v for v in base.vertices for t in range(m)}
    simplices = []
    for k in sorted(base.simplices):
        for s in base.of_dim(k):
            ids = base.simplex_ids(s)
            for t in range(m):
                for j in range(len(ids)):
                    simp = [_fiber_vertex(ids[i], t, m) for i in range(j + 1)]
                    simp += [_fiber_vertex(ids[i], t + 1, m) for i in range(j, len(ids))]
                    simplices.append(simp)
    total = SimplicialComplex(verts, simplices)
    return SimplicialBundle(total, base, vertex_map)


def twisted_tetra_bundle(orders: dict, offsets: dict):
    """Assemble a circle bundle over the boundary of the tetrahedron from
    twisted staircase stalks.

    orders[tri] is a permutation of (0, 1, 2) giving the shuffle order of the
    triangle's vertices; offsets[(tri, v)] rotates the fiber attachment over
    vertex v in that stalk. Returns None when the stalks do not induce the
    same annulus over some shared edge (no simplicial complex results).
    """
    base = _tetra_boundary_base()
    tris = [("1", "2", "3"), ("1", "2", "4"), ("1", "3", "4"), ("2", "3", "4")]
    stalks = {}
    for tri in tris:
        perm = orders[tri]
        ordered = [tri[k] for k in perm]
        simpl = []
        for t in range(3):
            level = [(x, (t + offsets[(tri, x)]) % 3) for x in ordered]
            nxt = [(x, (t + 1 + offsets[(tri, x)]) % 3) for x in ordered]
            for j in range(3):
                simp = [_fiber_vertex(x, tt, 3) for x, tt in level[:j + 1]]
                simp += [_fiber_vertex(x, tt, 3) for x, tt in nxt[j:]]
                simpl.append(tuple(sorted(simp)))
        stalks[tri] = simpl

    # shared edges must induce identical annuli
    def annulus(tri, a, bb):
        keep = set()
        for simp in stalks[tri]:
            tri_faces = [simp[:i] + simp[i + 1:] for i in range(4)]
            for f in tri_faces:
                labels = {v.split("^")[0] for v in f}
                if labels == {a, bb}:
                    keep.add(frozenset(f))
        return keep

    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            shared = sorted(set(tris[i]) & set(tris[j]))
            if len(shared) == 2:
                a, bb = shared
                if annulus(tris[i], a, bb) != annulus(tris[j], a, bb):
                    return None
    verts = [_fiber_vertex(v, t, 3) for v in base.vertices for t in range(3)]
    vertex_map = {_fiber_vertex(v, t, 3): v for v in base.vertices for t in range(3)}
    simplices = [list(s) for tri in tris for s in stalks[tri]]
    total = SimplicialComplex(verts, simplices)
    return SimplicialBundle(total, base, vertex_map)


def _tetra_boundary_base() -> SimplicialComplex:
    verts = ["1", "2", "3", "4"]
    return SimplicialComplex(verts, [
        ["1", "2", "3"], ["1", "2", "4"], ["1", "3", "4"], ["2", "3", "4"],
    ])


def hopf_bundle() -> SimplicialBundle:
    """The shipped 12-vertex triangulated Hopf fibration over the 4-vertex
    2-sphere; validated by the caller, not trusted."""
    import json
    from importlib import resources

    data = json.loads(
        resources.files("eulerch.data").joinpath("hopf_bundle.json").read_text()
    )
    total = SimplicialComplex(data["total"]["vertices"], data["total"]["simplices"])
    base = SimplicialComplex(data["base"]["vertices"], data["base"]["simplices"])
    return SimplicialBundle(total, base, data["vertex_map"])
