"""Enumerate all 9-tetrahedron triangulations of (triangle) x (circle) with
3+3+3 fiber vertices projecting simplicially onto one base triangle.

Structure: each tetrahedron doubles exactly one fiber edge, so a stalk is a
choice of partners T(x, a) = (c_y, c_z) for each base vertex x and fiber edge
(a, a+1) over it; the transversal faces (one fiber vertex over each base
vertex) must each be shared by exactly two tetrahedra.
"""

import itertools
import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from eulerch.simplicial import SimplicialComplex  # noqa: E402


def enumerate_stalks(tri):
    """All valid stalks over tri = (u, v, w); returns lists of frozensets."""
    u, v, w = tri
    slots = [(x, a) for x in range(3) for a in range(3)]
    # tetra for slot (x, a) with partners (cy, cz):
    # faces contributing to the transversal multiset
    results = []
    counts = defaultdict(int)
    choice = {}

    def transversal_faces(x, a, cy, cz):
        if x == 0:
            return ((a, cy, cz), ((a + 1) % 3, cy, cz))
        if x == 1:
            return ((cy, a, cz), (cy, (a + 1) % 3, cz))
        return ((cy, cz, a), (cy, cz, (a + 1) % 3))

    def backtrack(k):
        if k == len(slots):
            if all(c in (0, 2) for c in counts.values()):
                results.append(dict(choice))
            return
        x, a = slots[k]
        for cy in range(3):
            for cz in range(3):
                faces = transversal_faces(x, a, cy, cz)
                if any(counts[f] >= 2 for f in faces):
                    continue
                for f in faces:
                    counts[f] += 1
                choice[(x, a)] = (cy, cz)
                backtrack(k + 1)
                del choice[(x, a)]
                for f in faces:
                    counts[f] -= 1

    backtrack(0)
    out = []
    for ch in results:
        tets = []
        ok = True
        for (x, a), (cy, cz) in ch.items():
            fe = [f"{tri[x]}^{a}", f"{tri[x]}^{(a + 1) % 3}"]
            others = [tri[(x + 1) % 3], tri[(x + 2) % 3]]
            if x == 0:
                rest = [f"{tri[1]}^{cy}", f"{tri[2]}^{cz}"]
            elif x == 1:
                rest = [f"{tri[0]}^{cy}", f"{tri[2]}^{cz}"]
            else:
                rest = [f"{tri[0]}^{cy}", f"{tri[1]}^{cz}"]
            tet = frozenset(fe + rest)
            if len(tet) != 4:
                ok = False
                break
            tets.append(tet)
        if not ok or len(set(tets)) != 9:
            continue
        out.append(frozenset(tets))
    return sorted(set(out), key=lambda s: sorted(sorted(t) for t in s))


def solid_torus_check(tets):
    verts = sorted({x for t in tets for x in t})
    cx = SimplicialComplex(verts, [list(t) for t in tets])
    betti, torsion = cx.homology_z()
    return betti == [1, 1, 0, 0] and all(not t for t in torsion)


def stalk_annuli(tri, tets):
    out = {}
    for a, b in itertools.combinations(tri, 2):
        tris_over = set()
        for tet in tets:
            for f in itertools.combinations(sorted(tet), 3):
                labels = {x.split("^")[0] for x in f}
                if labels == {a, b}:
                    tris_over.add(frozenset(f))
        out[(a, b)] = frozenset(tris_over)
    return out


if __name__ == "__main__":
    tri = ("1", "2", "3")
    stalks = enumerate_stalks(tri)
    print(f"raw stalks: {len(stalks)}")
    good = [s for s in stalks if solid_torus_check(s)]
    print(f"solid torus stalks: {len(good)}")
