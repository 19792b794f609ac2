"""Locally ordered simplicial complexes with exact homology.

A complex carries one global linear order on its vertices; every simplex is
stored as a tuple of vertex positions in increasing order, which makes the
face operators d_i unambiguous. Complexes are immutable after construction.
"""

from __future__ import annotations

from .errors import NotACycle
from .ratlin import Matrix, smith_normal_form

__all__ = [
    "SimplicialComplex",
    "boundary_of_chain",
    "has_sphere_homology",
    "is_acyclic",
    "barycentric",
    "sd_vertex_id",
    "subdivide_chain",
]


class SimplicialComplex:
    """Finite simplicial complex with globally ordered vertices."""

    def __init__(self, vertices, simplices):
        """vertices: ids in global order; simplices: iterables of vertex ids.

        The simplex set is closed under faces automatically; listing only the
        maximal simplices is enough.
        """
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        closed = set()
        for s in simplices:
            idx = tuple(sorted(self.vertex_index[v] for v in s))
            if len(set(idx)) != len(idx):
                raise ValueError(f"simplex with repeated vertices: {s}")
            if not idx:
                continue
            stack = [idx]
            while stack:
                t = stack.pop()
                if t in closed:
                    continue
                closed.add(t)
                if len(t) > 1:
                    stack.extend(t[:i] + t[i + 1:] for i in range(len(t)))
        by_dim = {}
        for t in closed:
            by_dim.setdefault(len(t) - 1, []).append(t)
        self.simplices = {k: tuple(sorted(v)) for k, v in sorted(by_dim.items())}
        self._index = {
            k: {s: i for i, s in enumerate(ss)} for k, ss in self.simplices.items()
        }
        self.dim = max(self.simplices) if self.simplices else -1

    def of_dim(self, k):
        return self.simplices.get(k, ())

    def simplex_ids(self, t):
        return tuple(self.vertices[i] for i in t)

    def index_of(self, k, t):
        return self._index[k][t]

    def simplex_from_ids(self, ids):
        t = tuple(sorted(self.vertex_index[v] for v in ids))
        if t not in self._index.get(len(t) - 1, {}):
            raise KeyError(f"no simplex {ids}")
        return t

    def counts(self):
        return [len(self.of_dim(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self):
        return sum((-1) ** k * len(self.of_dim(k)) for k in range(self.dim + 1))

    def boundary_matrix(self, k: int) -> Matrix:
        """Matrix of the simplicial boundary C_k -> C_{k-1}."""
        rows = self.of_dim(k - 1)
        cols = self.of_dim(k)
        idx = self._index.get(k - 1, {})
        m = [[0] * len(cols) for _ in range(len(rows))]
        for j, s in enumerate(cols):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                m[idx[face]][j] = (-1) ** i
        if not rows:
            return Matrix.zeros(0, len(cols))
        return Matrix(m)

    def betti(self):
        """Betti numbers over Q, degrees 0..dim."""
        if self.dim < 0:
            return []
        dims = [len(self.of_dim(k)) for k in range(self.dim + 1)]
        bnds = [None] + [self.boundary_matrix(k) for k in range(1, self.dim + 1)]
        from .ratlin import betti_numbers
        return betti_numbers(dims, bnds)

    def homology_z(self):
        """(betti, torsion) over Z; torsion[k] lists coefficients > 1."""
        if self.dim < 0:
            return [], []
        dims = [len(self.of_dim(k)) for k in range(self.dim + 1)]
        bnds = [self.boundary_matrix(k) for k in range(1, self.dim + 2)]
        return homology_from_boundaries(dims, [None] + bnds)


def homology_from_boundaries(dims, boundaries):
    """Integer homology of a free chain complex from its boundary matrices.

    boundaries[k]: C_k -> C_{k-1}; index 0 and indices past the top may be
    None or absent. Returns (betti per degree, torsion coefficients > 1 per
    degree): H_k = Z^betti[k] + sum Z/t for t in torsion[k].
    """
    top = len(dims) - 1
    ranks = [0] * (top + 2)
    divisors = [[] for _ in range(top + 2)]
    for k in range(1, top + 1):
        bk = boundaries[k] if k < len(boundaries) else None
        if bk is None or bk.rows == 0 or bk.cols == 0:
            continue
        _, d, _ = smith_normal_form(bk)
        diag = [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i]]
        ranks[k] = len(diag)
        divisors[k] = diag
    betti = [dims[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]
    torsion = [[t for t in divisors[k + 1] if t > 1] for k in range(top + 1)]
    return betti, torsion


def _reduced_betti(cx: SimplicialComplex, ring: str):
    """Reduced Betti numbers (degree -1 augmented away; empty complex -> [])."""
    if cx.dim < 0:
        return [], []
    if ring == "Q":
        b = cx.betti()
        t = [[] for _ in b]
    else:
        b, t = cx.homology_z()
    b = list(b)
    if b:
        b[0] -= 1
    return b, t


def is_acyclic(cx: SimplicialComplex, ring: str = "Q") -> bool:
    """True when the complex has the (reduced) homology of a point."""
    b, t = _reduced_betti(cx, ring)
    return cx.dim >= 0 and all(x == 0 for x in b) and all(not x for x in t)


def has_sphere_homology(cx: SimplicialComplex, k: int, ring: str = "Q") -> bool:
    """True when the complex has the reduced homology of S^k (k >= 0)."""
    b, t = _reduced_betti(cx, ring)
    if cx.dim < 0 or any(x for x in t):
        return False
    want = [0] * len(b)
    if k >= len(b):
        return False
    want[k] = 1
    return b == want


# -- chains ------------------------------------------------------------


def boundary_of_chain(cx: SimplicialComplex, chain: dict) -> dict:
    """Simplicial boundary of {simplex index-tuple: coefficient}."""
    out = {}
    for s, c in chain.items():
        if not c:
            continue
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            v = out.get(face, 0) + (-1) ** i * c
            if v:
                out[face] = v
            elif face in out:
                del out[face]
    return out


def check_cycle(cx: SimplicialComplex, chain: dict):
    bd = boundary_of_chain(cx, chain)
    if bd:
        raise NotACycle(f"boundary has {len(bd)} nonzero faces")


# -- barycentric subdivision -------------------------------------------


def sd_vertex_id(cx: SimplicialComplex, t) -> str:
    """Stable id of the barycenter of simplex t (an index tuple)."""
    return ".".join(str(v) for v in cx.simplex_ids(t))


def barycentric(cx: SimplicialComplex) -> SimplicialComplex:
    """First derived subdivision.

    Vertices are the simplices of the input; the global order lists
    barycenters by decreasing dimension of the original simplex (ties broken
    by vertex tuple), so every flag edge runs from a simplex to one of its
    proper faces. Simplices are the flags of the face relation.
    """
    all_simplices = [t for k in sorted(cx.simplices) for t in cx.of_dim(k)]
    order = sorted(all_simplices, key=lambda t: (-len(t), t))
    names = {t: sd_vertex_id(cx, t) for t in all_simplices}
    flags = []

    def grow(flag):
        flags.append([names[t] for t in flag])
        last = flag[-1]
        if len(last) > 1:
            for i in range(len(last)):
                grow(flag + [last[:i] + last[i + 1:]])

    for t in all_simplices:
        grow([t])
    return SimplicialComplex([names[t] for t in order], flags)


def _sd_simplex(cx: SimplicialComplex, t):
    """Subdivision of one simplex as {flag (tuple of index tuples): sign}.

    Defined by the cone recursion Sd(s) = barycenter(s) * Sd(boundary s);
    this is a chain map, so subdividing a cycle yields a cycle.
    """
    if len(t) == 1:
        return {(t,): 1}
    out = {}
    for i in range(len(t)):
        face = t[:i] + t[i + 1:]
        sign = (-1) ** i
        for flag, s in _sd_simplex(cx, face).items():
            key = (t,) + flag
            out[key] = out.get(key, 0) + sign * s
    return {k: v for k, v in out.items() if v}


def subdivide_chain(cx: SimplicialComplex, sd: SimplicialComplex, chain: dict) -> dict:
    """Push a chain on cx to the derived subdivision (index-tuple keyed)."""
    out = {}
    for t, c in chain.items():
        if not c:
            continue
        for flag, s in _sd_simplex(cx, t).items():
            key = sd.simplex_from_ids([sd_vertex_id(cx, f) for f in flag])
            v = out.get(key, 0) + c * s
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out
