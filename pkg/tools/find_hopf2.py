"""Generalized search: stalks over the tetrahedron faces are stacks of three
prisms, each prism with its own shuffle order, plus per-vertex fiber
attachment offsets. Stalks are joined along shared-edge annuli by hashing;
assemblies are filtered by pseudomanifold and exact integer homology checks.

Run:  python3 tools/find_hopf2.py [out.json]
"""

import itertools
import json
import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from eulerch.simplicial import SimplicialComplex  # noqa: E402

TRIS = [("1", "2", "3"), ("1", "2", "4"), ("1", "3", "4"), ("2", "3", "4")]
EDGES = [("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")]
PERMS = list(itertools.permutations(range(3)))


def fv(v, t):
    return f"{v}^{t % 3}"


def build_stalk(tri, perms3, offs):
    """9 tetrahedra of a prism stack; perms3[t] shuffles the prism between
    fiber levels t and t+1; offs rotates the attachment over each vertex."""
    tets = []
    for t in range(3):
        ordered = [tri[k] for k in perms3[t]]
        lo = [fv(x, t + offs[x]) for x in ordered]
        hi = [fv(x, t + 1 + offs[x]) for x in ordered]
        for j in range(3):
            tet = frozenset(lo[: j + 1] + hi[j:])
            if len(tet) != 4:
                return None
            tets.append(tet)
    if len(set(tets)) != 9:
        return None
    return tets


def stalk_annuli(tri, tets):
    """For each edge of tri: the set of boundary triangles lying over it."""
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


def fiber_edges_ok(tri, tets):
    """Each vertex fiber must contribute exactly its 3 triangle edges."""
    for v in tri:
        edges = set()
        for tet in tets:
            for f in itertools.combinations(sorted(tet), 2):
                labels = {x.split("^")[0] for x in f}
                if labels == {v}:
                    edges.add(frozenset(f))
        want = {frozenset((fv(v, t), fv(v, t + 1))) for t in range(3)}
        if edges != want:
            return False
    return True


def stalk_options(tri, fix_offsets=False):
    opts = []
    offsets_list = [{tri[0]: 0, tri[1]: 0, tri[2]: 0}] if fix_offsets else [
        {tri[0]: o0, tri[1]: o1, tri[2]: o2}
        for o0 in range(3) for o1 in range(3) for o2 in range(3)
    ]
    seen = set()
    for perms3 in itertools.product(PERMS, repeat=3):
        for offs in offsets_list:
            tets = build_stalk(tri, perms3, offs)
            if tets is None:
                continue
            key = frozenset(tets)
            if key in seen:
                continue
            seen.add(key)
            if not fiber_edges_ok(tri, tets):
                continue
            opts.append((tets, stalk_annuli(tri, tets)))
    return opts


def homology_type(tets):
    verts = sorted({v for tet in tets for v in tet})
    cx = SimplicialComplex(verts, [list(t) for t in tets])
    # closed pseudomanifold: every triangle in exactly two tetrahedra
    tri_count = defaultdict(int)
    for t in cx.of_dim(3):
        for i in range(4):
            tri_count[t[:i] + t[i + 1:]] += 1
    if any(c != 2 for c in tri_count.values()):
        return None
    if len(cx.of_dim(0)) != 12:
        return None
    betti, torsion = cx.homology_z()
    return tuple(betti), tuple(tuple(x) for x in torsion)


def main():
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else None
    print("enumerating stalks...")
    opts = {}
    opts[TRIS[0]] = stalk_options(TRIS[0], fix_offsets=True)
    for tri in TRIS[1:]:
        opts[tri] = stalk_options(tri)
    for tri in TRIS:
        print(f"  stalk {tri}: {len(opts[tri])} options")

    by_12 = defaultdict(list)
    for tets, ann in opts[TRIS[1]]:
        by_12[ann[("1", "2")]].append((tets, ann))
    by_13_14 = defaultdict(list)
    for tets, ann in opts[TRIS[2]]:
        by_13_14[(ann[("1", "3")], ann[("1", "4")])].append((tets, ann))
    by_23_24_34 = defaultdict(list)
    for tets, ann in opts[TRIS[3]]:
        by_23_24_34[(ann[("2", "3")], ann[("2", "4")], ann[("3", "4")])].append((tets, ann))

    found = {}
    assemblies = 0
    for tets0, ann0 in opts[TRIS[0]]:
        for tets1, ann1 in by_12.get(ann0[("1", "2")], ()):
            for tets2, ann2 in by_13_14.get((ann0[("1", "3")], ann1[("1", "4")]), ()):
                key3 = (ann0[("2", "3")], ann1[("2", "4")], ann2[("3", "4")])
                for tets3, ann3 in by_23_24_34.get(key3, ()):
                    assemblies += 1
                    all_tets = tets0 + tets1 + tets2 + tets3
                    if len(set(all_tets)) != 36:
                        continue
                    h = homology_type(all_tets)
                    if h is None:
                        continue
                    found.setdefault(h, []).append(all_tets)
    print(f"assemblies: {assemblies}")
    for h, items in sorted(found.items(), key=lambda kv: str(kv[0])):
        print(f"  homology {h}: {len(items)}")
    target = ((1, 0, 0, 1), ((), (), (), ()))
    if target in found and out_path:
        freeze(found[target][0], out_path)


def freeze(tets, path):
    verts = [fv(v, t) for v in "1234" for t in range(3)]
    data = {
        "total": {
            "vertices": verts,
            "simplices": sorted(sorted(t) for t in tets),
        },
        "base": {
            "vertices": ["1", "2", "3", "4"],
            "simplices": [["1", "2", "3"], ["1", "2", "4"],
                          ["1", "3", "4"], ["2", "3", "4"]],
        },
        "vertex_map": {fv(v, t): v for v in "1234" for t in range(3)},
    }
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
