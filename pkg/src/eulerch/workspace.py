"""File formats and the cross-referencing workspace.

All objects live in JSON files. Rationals serialize as "p/q" (or "p" when
the denominator is 1) in canonical lowest terms. Reference fields
(complexRef, aggregationRef) hold either a path relative to the referring
file or an inline object. Canonical serialization sorts object keys and
keeps array order, so the cell listing order in a file is the basis order
and reloading a canonical file is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .aggmap import Aggregation, subdivision_chain_map, validate_aggregation
from .cellx import CellPoset, SphereComplex, orient, reverse_orientation
from .errors import InvalidComplex, WorkspaceError
from .locsys import CellLocalSystem, build_cell_system
from .simplicial import SimplicialComplex
from .trigest import SimplicialBundle

__all__ = [
    "frac_to_str",
    "frac_from_str",
    "canonical_text",
    "detect_kind",
    "Workspace",
]


def frac_to_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def frac_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def canonical_text(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def detect_kind(data) -> str:
    if not isinstance(data, dict):
        raise WorkspaceError("top-level JSON value must be an object")
    if "cells" in data and "covers" in data:
        return "complex"
    if "cell_map" in data and "source" in data:
        return "aggregation"
    if "fibers" in data and "transitions" in data:
        return "system"
    if "total" in data and "vertex_map" in data:
        return "bundle"
    if "chain" in data:
        return "chain"
    if "cycle" in data:
        return "cycle"
    raise WorkspaceError("unrecognized file kind (no known schema keys)")


@dataclass
class LoadedComplex:
    poset: CellPoset
    sphere: SphereComplex
    n: int
    path: Path | None


class Workspace:
    """Registry of loaded objects with referential integrity by path."""

    def __init__(self):
        self._complexes = {}
        self._aggregations = {}

    # -- raw io ---------------------------------------------------------

    @staticmethod
    def read_json(path: Path) -> dict:
        try:
            return json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise WorkspaceError(f"{path}: file not found") from exc
        except json.JSONDecodeError as exc:
            raise WorkspaceError(f"{path}: invalid JSON at line {exc.lineno}, "
                                 f"column {exc.colno}") from exc

    def _resolve(self, ref, base_dir: Path, loader, registry):
        if isinstance(ref, dict):
            return loader(ref, base_dir, None)
        if not isinstance(ref, str):
            raise WorkspaceError(f"reference must be a path or inline object, got {ref!r}")
        path = (base_dir / ref).resolve()
        if path not in registry:
            data = self.read_json(path)
            registry[path] = loader(data, path.parent, path)
        return registry[path]

    # -- complexes --------------------------------------------------------

    def load_complex(self, data_or_path, base_dir: Path | None = None) -> LoadedComplex:
        if isinstance(data_or_path, (str, Path)):
            path = Path(data_or_path).resolve()
            return self._resolve(str(path.name), path.parent,
                                 self._complex_from_data, self._complexes)
        return self._complex_from_data(data_or_path, base_dir or Path("."), None)

    def _complex_from_data(self, data, base_dir: Path, path) -> LoadedComplex:
        for key in ("n", "cells", "covers"):
            if key not in data:
                raise WorkspaceError(f"complex file missing '{key}'")
        n = int(data["n"])
        cells = [(c["id"], int(c["dim"])) for c in data["cells"]]
        covers = [(f, c) for f, c in data["covers"]]
        poset = CellPoset(cells, covers)
        sphere = orient(poset, n)
        ori = data.get("orientation")
        if ori and "fund_class" in ori:
            want = ori["fund_class"]
            top = poset.cells_of_dim(n)
            got = {c: s for c, s in zip(top, sphere.fund_class)}
            if all(int(want[c]) == got[c] for c in want) and set(want) == set(top):
                pass
            else:
                flipped = {c: -s for c, s in got.items()}
                if set(want) == set(top) and all(int(want[c]) == flipped[c] for c in want):
                    sphere = reverse_orientation(sphere)
                else:
                    raise InvalidComplex(
                        "requested fund_class is not one of the two orientations")
        return LoadedComplex(poset, sphere, n, path)

    # -- aggregations ------------------------------------------------------

    def load_aggregation(self, data_or_path, base_dir: Path | None = None,
                         source: SphereComplex | None = None,
                         target: SphereComplex | None = None) -> Aggregation:
        if isinstance(data_or_path, (str, Path)):
            path = Path(data_or_path).resolve()
            data = self.read_json(path)
            base_dir = path.parent
        else:
            data = data_or_path
            base_dir = base_dir or Path(".")
        for key in ("source", "target", "cell_map"):
            if key not in data:
                raise WorkspaceError(f"aggregation file missing '{key}'")
        src = source or self._resolve(data["source"], base_dir,
                                      self._complex_from_data, self._complexes).sphere
        tgt = target or self._resolve(data["target"], base_dir,
                                      self._complex_from_data, self._complexes).sphere
        agg = Aggregation(src, tgt, dict(data["cell_map"]))
        return subdivision_chain_map(agg)

    # -- local systems -----------------------------------------------------

    def load_system(self, data_or_path, base_dir: Path | None = None) -> CellLocalSystem:
        if isinstance(data_or_path, (str, Path)):
            path = Path(data_or_path).resolve()
            data = self.read_json(path)
            base_dir = path.parent
        else:
            data = data_or_path
            base_dir = base_dir or Path(".")
        for key in ("base", "fibers", "transitions"):
            if key not in data:
                raise WorkspaceError(f"system file missing '{key}'")
        base = SimplicialComplex(data["base"]["vertices"], data["base"]["simplices"])
        fibers = {}
        for v in base.vertices:
            if v not in data["fibers"]:
                raise WorkspaceError(f"no fiber for base vertex {v}")
            fibers[v] = self._resolve(data["fibers"][v], base_dir,
                                      self._complex_from_data, self._complexes).sphere
        cell_maps = {}
        for e in base.of_dim(1):
            v0, v1 = base.simplex_ids(e)
            key = f"{v0},{v1}"
            if key not in data["transitions"]:
                raise WorkspaceError(f"no transition for edge {key}")
            ref = data["transitions"][key]
            if isinstance(ref, dict) and "cell_map" in ref:
                cell_maps[(v0, v1)] = dict(ref["cell_map"])
            elif isinstance(ref, str):
                agg_data = self.read_json((base_dir / ref).resolve())
                cell_maps[(v0, v1)] = dict(agg_data["cell_map"])
            else:
                raise WorkspaceError(f"bad transition reference for edge {key}")
        return build_cell_system(base, fibers, cell_maps)

    # -- bundles -----------------------------------------------------------

    def load_bundle(self, data_or_path, base_dir: Path | None = None) -> SimplicialBundle:
        if isinstance(data_or_path, (str, Path)):
            data = self.read_json(Path(data_or_path))
        else:
            data = data_or_path
        for key in ("total", "base", "vertex_map"):
            if key not in data:
                raise WorkspaceError(f"bundle file missing '{key}'")
        total = SimplicialComplex(data["total"]["vertices"], data["total"]["simplices"])
        base = SimplicialComplex(data["base"]["vertices"], data["base"]["simplices"])
        return SimplicialBundle(total, base, dict(data["vertex_map"]))

    # -- chains and cycles ---------------------------------------------------

    def load_chain(self, data_or_path, base_dir: Path | None = None) -> list:
        if isinstance(data_or_path, (str, Path)):
            path = Path(data_or_path).resolve()
            data = self.read_json(path)
            base_dir = path.parent
        else:
            data = data_or_path
            base_dir = base_dir or Path(".")
        if "chain" not in data:
            raise WorkspaceError("chain file missing 'chain'")
        aggs = []
        prev_target = None
        for ref in data["chain"]:
            agg = self.load_aggregation(
                ref if isinstance(ref, dict) else (base_dir / ref).resolve(),
                base_dir, source=prev_target)
            aggs.append(agg)
            prev_target = agg.target
        return aggs

    @staticmethod
    def load_cycle(data_or_path, base: SimplicialComplex) -> dict:
        if isinstance(data_or_path, (str, Path)):
            data = Workspace.read_json(Path(data_or_path))
        else:
            data = data_or_path
        if "cycle" not in data:
            raise WorkspaceError("cycle file missing 'cycle'")
        out = {}
        for item in data["cycle"]:
            s = base.simplex_from_ids(item["simplex"])
            out[s] = out.get(s, 0) + int(item["coeff"])
        return out


# -- canonical serializers (data -> normalized data) -----------------------


def canonical_complex(data) -> dict:
    out = {
        "n": int(data["n"]),
        "cells": [{"id": str(c["id"]), "dim": int(c["dim"])} for c in data["cells"]],
        "covers": sorted([[str(f), str(c)] for f, c in data["covers"]]),
    }
    if "orientation" in data:
        out["orientation"] = {
            "fund_class": {str(k): int(v)
                           for k, v in sorted(data["orientation"]["fund_class"].items())}
        }
    return out


def canonical_bundle(data) -> dict:
    return {
        "total": {
            "vertices": [str(v) for v in data["total"]["vertices"]],
            "simplices": sorted(sorted(str(v) for v in s)
                                for s in data["total"]["simplices"]),
        },
        "base": {
            "vertices": [str(v) for v in data["base"]["vertices"]],
            "simplices": sorted(sorted(str(v) for v in s)
                                for s in data["base"]["simplices"]),
        },
        "vertex_map": {str(k): str(v) for k, v in sorted(data["vertex_map"].items())},
    }


def canonical_aggregation(data) -> dict:
    return {
        "source": data["source"] if isinstance(data["source"], str)
        else canonical_complex(data["source"]),
        "target": data["target"] if isinstance(data["target"], str)
        else canonical_complex(data["target"]),
        "cell_map": {str(k): str(v) for k, v in sorted(data["cell_map"].items())},
    }


def canonical_system(data) -> dict:
    return {
        "base": {
            "vertices": [str(v) for v in data["base"]["vertices"]],
            "simplices": sorted(sorted(str(v) for v in s)
                                for s in data["base"]["simplices"]),
        },
        "fibers": {str(k): v if isinstance(v, str) else canonical_complex(v)
                   for k, v in sorted(data["fibers"].items())},
        "transitions": {str(k): v if isinstance(v, str) else canonical_aggregation(v)
                        for k, v in sorted(data["transitions"].items())},
    }


def canonical_chain(data) -> dict:
    return {"chain": [r if isinstance(r, str) else canonical_aggregation(r)
                      for r in data["chain"]]}


def canonical_cycle(data) -> dict:
    return {"cycle": sorted(
        ({"simplex": [str(v) for v in item["simplex"]], "coeff": int(item["coeff"])}
         for item in data["cycle"]),
        key=lambda it: it["simplex"],
    )}


CANONICALIZERS = {
    "complex": canonical_complex,
    "aggregation": canonical_aggregation,
    "system": canonical_system,
    "bundle": canonical_bundle,
    "chain": canonical_chain,
    "cycle": canonical_cycle,
}


def canonicalize(data) -> str:
    kind = detect_kind(data)
    return canonical_text(CANONICALIZERS[kind](data))
