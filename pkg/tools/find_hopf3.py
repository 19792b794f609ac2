"""Assemble circle bundles over the tetrahedron boundary from the complete
9-tetrahedron stalk family, reduce by fiber-relabeling gauge, filter by GF(2)
Betti numbers and exact integer homology, and freeze a Hopf representative.

Run:  python3 tools/find_hopf3.py [out.json]
"""

import itertools
import json
import sys
import time
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parents[0]))

from stalks import enumerate_stalks, solid_torus_check, stalk_annuli  # noqa: E402

TRIS = [("1", "2", "3"), ("1", "2", "4"), ("1", "3", "4"), ("2", "3", "4")]
D3 = [(s, c) for s in (1, -1) for c in range(3)]  # t -> s*t + c mod 3


def relabel_vertex(x, g):
    v, t = x.split("^")
    s, c = g
    return f"{v}^{(s * int(t) + c) % 3}"


def relabel_stalk(tets, gauges):
    out = set()
    for tet in tets:
        out.add(frozenset(
            relabel_vertex(x, gauges.get(x.split("^")[0], (1, 0))) for x in tet
        ))
    return frozenset(out)


def canonical_under_123(tets):
    best = None
    for g1 in D3:
        for g2 in D3:
            for g3 in D3:
                img = relabel_stalk(tets, {"1": g1, "2": g2, "3": g3})
                key = tuple(sorted(tuple(sorted(t)) for t in img))
                if best is None or key < best[0]:
                    best = (key, img)
    return best[1]


def gf2_rank(cols):
    pivots = []
    rank = 0
    for c in cols:
        for p in pivots:
            c = min(c, c ^ p)
        if c:
            pivots.append(c)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def f2_betti(all_tets):
    verts = sorted({v for tet in all_tets for v in tet})
    if len(verts) != 12:
        return None
    vi = {v: i for i, v in enumerate(verts)}
    tets = sorted({tuple(sorted(vi[v] for v in tet)) for tet in all_tets})
    tris = sorted({t[:i] + t[i + 1:] for t in tets for i in range(4)})
    cnt = defaultdict(int)
    for t in tets:
        for i in range(4):
            cnt[t[:i] + t[i + 1:]] += 1
    if any(c != 2 for c in cnt.values()):
        return None
    edges = sorted({t[:i] + t[i + 1:] for t in tris for i in range(3)})
    ei = {e: i for i, e in enumerate(edges)}
    ti = {t: i for i, t in enumerate(tris)}
    d1 = [(1 << e[0]) | (1 << e[1]) for e in edges]
    d2 = [sum(1 << ei[t[:i] + t[i + 1:]] for i in range(3)) for t in tris]
    d3 = [sum(1 << ti[t[:i] + t[i + 1:]] for i in range(4)) for t in tets]
    r1, r2, r3 = gf2_rank(d1), gf2_rank(d2), gf2_rank(d3)
    return (len(verts) - r1, len(edges) - r1 - r2, len(tris) - r2 - r3,
            len(tets) - r3)


def exact_homology(all_tets):
    from eulerch.simplicial import SimplicialComplex
    verts = sorted({v for tet in all_tets for v in tet})
    cx = SimplicialComplex(verts, [list(t) for t in all_tets])
    betti, torsion = cx.homology_z()
    return tuple(betti), tuple(tuple(x) for x in torsion)


def main():
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else None
    t0 = time.time()
    stalks = {}
    for tri in TRIS:
        raw = enumerate_stalks(tri)
        good = [s for s in raw if solid_torus_check(s)]
        stalks[tri] = good
        print(f"stalk {tri}: {len(good)} valid of {len(raw)} ({time.time()-t0:.0f}s)")

    reps = sorted({
        tuple(sorted(tuple(sorted(t)) for t in canonical_under_123(s)))
        for s in stalks[TRIS[0]]
    })
    rep_stalks = [frozenset(frozenset(t) for t in r) for r in reps]
    print(f"T0 gauge classes: {len(rep_stalks)} ({time.time()-t0:.0f}s)")

    by_12 = defaultdict(list)
    for s in stalks[TRIS[1]]:
        by_12[stalk_annuli(TRIS[1], s)[("1", "2")]].append(s)
    by_13_14 = defaultdict(list)
    for s in stalks[TRIS[2]]:
        ann = stalk_annuli(TRIS[2], s)
        by_13_14[(ann[("1", "3")], ann[("1", "4")])].append(s)
    by_234 = defaultdict(list)
    for s in stalks[TRIS[3]]:
        ann = stalk_annuli(TRIS[3], s)
        by_234[(ann[("2", "3")], ann[("2", "4")], ann[("3", "4")])].append(s)
    print(f"indexes built ({time.time()-t0:.0f}s)")

    hist = defaultdict(int)
    hopf = None
    assemblies = 0
    for s0 in rep_stalks:
        ann0 = stalk_annuli(TRIS[0], s0)
        for s1 in by_12.get(ann0[("1", "2")], ()):
            ann1 = stalk_annuli(TRIS[1], s1)
            for s2 in by_13_14.get((ann0[("1", "3")], ann1[("1", "4")]), ()):
                ann2 = stalk_annuli(TRIS[2], s2)
                key3 = (ann0[("2", "3")], ann1[("2", "4")], ann2[("3", "4")])
                for s3 in by_234.get(key3, ()):
                    assemblies += 1
                    all_tets = list(s0) + list(s1) + list(s2) + list(s3)
                    if len(set(all_tets)) != 36:
                        continue
                    fb = f2_betti(all_tets)
                    if fb is None:
                        continue
                    hist[fb] += 1
                    if fb == (1, 0, 0, 1) and hopf is None:
                        h = exact_homology(all_tets)
                        print(f"F2 sphere found; exact homology: {h}")
                        if h == ((1, 0, 0, 1), ((), (), (), ())):
                            hopf = sorted(sorted(t) for t in all_tets)
                            print("integral homology sphere FOUND")
                            if out_path:
                                freeze(hopf, out_path)
                            print(f"assemblies so far: {assemblies}")
                            report(hopf)
                            return
    print(f"assemblies: {assemblies} ({time.time()-t0:.0f}s)")
    for k, v in sorted(hist.items()):
        print("  F2 betti", k, v)


def freeze(tets, path):
    verts = [f"{v}^{t}" for v in "1234" for t in range(3)]
    data = {
        "total": {"vertices": verts, "simplices": tets},
        "base": {
            "vertices": ["1", "2", "3", "4"],
            "simplices": [["1", "2", "3"], ["1", "2", "4"],
                          ["1", "3", "4"], ["2", "3", "4"]],
        },
        "vertex_map": {f"{v}^{t}": v for v in "1234" for t in range(3)},
    }
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def report(tets):
    from eulerch.simplicial import SimplicialComplex, subdivide_chain
    from eulerch.trigest import SimplicialBundle, validate_bundle, bundle_cochain
    from eulerch.euler import period

    verts = [f"{v}^{t}" for v in "1234" for t in range(3)]
    total = SimplicialComplex(verts, tets)
    base = SimplicialComplex(["1", "2", "3", "4"], [
        ["1", "2", "3"], ["1", "2", "4"], ["1", "3", "4"], ["2", "3", "4"]])
    b = SimplicialBundle(total, base, {f"{v}^{t}": v for v in "1234" for t in range(3)})
    rep = validate_bundle(b)
    print("bundle valid:", rep.ok)
    if not rep.ok:
        print(rep.first_failure())
        return
    cs, tau = bundle_cochain(b)
    cyc = {}
    top = tuple(range(4))
    for i in range(4):
        cyc[top[:i] + top[i + 1:]] = (-1) ** i
    sd_cyc = subdivide_chain(base, tau.base, cyc)
    print("period on fundamental cycle:", period(tau, sd_cyc))


if __name__ == "__main__":
    main()
