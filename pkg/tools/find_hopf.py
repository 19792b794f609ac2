"""Search twisted staircase assemblies over the tetrahedron boundary for a
12-vertex circle bundle whose total space is an integral homology 3-sphere,
then validate it as a bundle and freeze it as package data.

Run from the repository root:  python3 tools/find_hopf.py [out.json]
"""

import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from eulerch.simplicial import SimplicialComplex  # noqa: E402
from eulerch.trigest import SimplicialBundle, twisted_tetra_bundle, validate_bundle  # noqa: E402

TRIS = [("1", "2", "3"), ("1", "2", "4"), ("1", "3", "4"), ("2", "3", "4")]
PERMS = list(itertools.permutations(range(3)))


def stalk_options(tri):
    opts = []
    for perm in PERMS:
        for o1 in range(3):
            for o2 in range(3):
                offs = {tri[0]: 0, tri[1]: o1, tri[2]: o2}
                opts.append((perm, offs))
    return opts


def main():
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else None
    fixed = {TRIS[0]: (PERMS[0], {"1": 0, "2": 0, "3": 0})}
    options = {tri: stalk_options(tri) for tri in TRIS[1:]}
    found = []
    tried = 0
    for opt1 in options[TRIS[1]]:
        for opt2 in options[TRIS[2]]:
            for opt3 in options[TRIS[3]]:
                tried += 1
                orders = {TRIS[0]: fixed[TRIS[0]][0], TRIS[1]: opt1[0],
                          TRIS[2]: opt2[0], TRIS[3]: opt3[0]}
                offsets = {}
                for tri, (perm, offs) in (
                    (TRIS[0], fixed[TRIS[0]]),
                    (TRIS[1], opt1), (TRIS[2], opt2), (TRIS[3], opt3),
                ):
                    for v in tri:
                        offsets[(tri, v)] = offs[v]
                b = twisted_tetra_bundle(orders, offsets)
                if b is None:
                    continue
                betti, torsion = b.total.homology_z()
                if betti == [1, 0, 0, 1] and all(not t for t in torsion):
                    found.append((orders, offsets, b))
                    print(f"homology S^3 at config #{tried}: orders={orders}")
                    if validate_bundle(b).ok:
                        print("  bundle validates; freezing")
                        if out_path:
                            freeze(b, out_path)
                        report_extra(b)
                        return
                    print("  bundle validation failed, continuing")
    print(f"tried {tried} configs, found {len(found)} homology spheres")


def report_extra(b: SimplicialBundle):
    from eulerch.euler import period
    from eulerch.locsys import total_complex, total_homology
    from eulerch.simplicial import subdivide_chain
    from eulerch.trigest import bundle_cochain

    cs, tau = bundle_cochain(b)
    sd = tau.base
    cyc = {}
    top = tuple(range(4))
    for i in range(4):
        cyc[top[:i] + top[i + 1:]] = (-1) ** i
    sd_cyc = subdivide_chain(b.base, sd, cyc)
    val = period(tau, sd_cyc)
    print(f"  period on the fundamental cycle: {val}")
    t = total_complex(cs)
    hz = total_homology(t, "Z")
    print(f"  Tot homology over Z: betti={hz.betti} torsion={hz.torsion}")


def freeze(b: SimplicialBundle, path: Path):
    data = {
        "total": {
            "vertices": list(b.total.vertices),
            "simplices": [list(b.total.simplex_ids(s))
                          for s in b.total.of_dim(b.total.dim)],
        },
        "base": {
            "vertices": list(b.base.vertices),
            "simplices": [list(b.base.simplex_ids(s))
                          for s in b.base.of_dim(b.base.dim)],
        },
        "vertex_map": dict(b.vertex_map),
    }
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(f"  wrote {path}")


if __name__ == "__main__":
    main()
