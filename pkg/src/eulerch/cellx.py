"""Abstract regular spherical cell complexes as face posets.

A CellPoset is the combinatorial skeleton (cells with dimensions plus
covering relations); orient() upgrades a validated poset to a SphereComplex
carrying based integer boundary matrices, an augmentation, and a fundamental
class. PL sphere recognition is undecidable, so validation runs homological
proxy checks: order complexes of the poset, of open lower ideals, and of
open upper sets (links) must look like the right spheres.

The per-dimension basis order is the order of appearance of cells in the
input, and every matrix is relative to it, so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidComplex, SignInconsistency
from .ratlin import Matrix
from .simplicial import SimplicialComplex, has_sphere_homology

__all__ = [
    "CellPoset",
    "SphereComplex",
    "BasedChainComplex",
    "ValidationReport",
    "order_complex",
    "validate_sphere",
    "orient",
    "dual",
    "chain_sphere",
    "reverse_orientation",
    "flip_cell",
    "permute_cells",
]


@dataclass
class ValidationReport:
    subject: str
    checks: list  # of (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def first_failure(self):
        for name, ok, detail in self.checks:
            if not ok:
                return f"{name}: {detail}"
        return None

    def raise_if_failed(self, exc=InvalidComplex):
        if not self.ok:
            raise exc(f"{self.subject}: {self.first_failure()}")

    def lines(self):
        out = []
        for name, ok, detail in self.checks:
            status = "ok" if ok else "FAIL"
            out.append(f"  {name}: {status}" + (f" ({detail})" if detail else ""))
        return out


class CellPoset:
    """Face poset of a finite cell complex: graded cells plus covering pairs."""

    def __init__(self, cells, covers):
        self.cells = tuple((str(c), int(d)) for c, d in cells)
        ids = [c for c, _ in self.cells]
        if len(set(ids)) != len(ids):
            raise InvalidComplex("duplicate cell ids")
        self.dim_of = dict(self.cells)
        self.covers = tuple((str(f), str(c)) for f, c in covers)
        for f, c in self.covers:
            if f not in self.dim_of or c not in self.dim_of:
                raise InvalidComplex(f"cover ({f},{c}) references unknown cell")
        self.by_dim = {}
        for c, d in self.cells:
            self.by_dim.setdefault(d, []).append(c)
        self.index = {}
        for d, cs in self.by_dim.items():
            for i, c in enumerate(cs):
                self.index[c] = (d, i)
        self.faces = {c: [] for c, _ in self.cells}
        self.cofaces = {c: [] for c, _ in self.cells}
        seen = set()
        for f, c in self.covers:
            if (f, c) in seen:
                continue
            seen.add((f, c))
            self.faces[c].append(f)
            self.cofaces[f].append(c)
        self.dim = max(self.by_dim) if self.by_dim else -1
        self._below = {}

    def cells_of_dim(self, d):
        return tuple(self.by_dim.get(d, ()))

    def below(self, c) -> frozenset:
        """Ids of all cells strictly below c."""
        cached = self._below.get(c)
        if cached is not None:
            return cached
        out = set()
        stack = list(self.faces[c])
        while stack:
            x = stack.pop()
            if x not in out:
                out.add(x)
                stack.extend(self.faces[x])
        out = frozenset(out)
        self._below[c] = out
        return out

    def above(self, c) -> frozenset:
        out = set()
        stack = list(self.cofaces[c])
        while stack:
            x = stack.pop()
            if x not in out:
                out.add(x)
                stack.extend(self.cofaces[x])
        return frozenset(out)

    def restriction(self, keep) -> "CellPoset":
        keep = set(keep)
        return CellPoset(
            [(c, d) for c, d in self.cells if c in keep],
            [(f, c) for f, c in self.covers if f in keep and c in keep],
        )

    def global_order(self):
        """All cells sorted by (dimension, appearance)."""
        return [c for d in sorted(self.by_dim) for c in self.by_dim[d]]


def order_complex(p: CellPoset) -> SimplicialComplex:
    """Simplicial complex of chains of the poset.

    Chains run through the full order relation (they may skip levels), not
    only through covering pairs.
    """
    below = {c: p.below(c) for c, _ in p.cells}
    memo = {}

    def chains_at(c):
        got = memo.get(c)
        if got is None:
            got = [(c,)]
            for d in below[c]:
                for ch in chains_at(d):
                    got.append(ch + (c,))
            memo[c] = got
        return got

    order = p.global_order()
    all_chains = []
    for c in order:
        all_chains.extend(chains_at(c))
    return SimplicialComplex(order, all_chains)


def validate_sphere(p: CellPoset, n: int) -> ValidationReport:
    """Homological proxy validation of an n-sphere cell poset."""
    checks = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        return ok

    graded = all(p.dim_of[f] == p.dim_of[c] - 1 for f, c in p.covers)
    add("graded-covers", graded,
        "" if graded else "a covering pair does not drop dimension by 1")
    dims_ok = (
        n >= 1
        and p.dim == n
        and all(d in p.by_dim for d in range(n + 1))
    )
    add("dimensions", dims_ok,
        f"top dim {p.dim}, expected {n} with all lower dims populated" if not dims_ok else "")
    if not (graded and dims_ok):
        return ValidationReport("sphere", checks)

    pure = all(p.faces[c] for c, d in p.cells if d >= 1) and all(
        p.cofaces[c] for c, d in p.cells if d < n
    )
    add("pure", pure, "" if pure else "cell with empty boundary or no coface")

    edges_ok = all(
        len(set(p.faces[c])) == 2 for c in p.cells_of_dim(1)
    )
    add("edge-regularity", edges_ok,
        "" if edges_ok else "an edge does not have two distinct endpoints")

    diamond_ok = True
    diamond_msg = ""
    for c, d in p.cells:
        if d < 2:
            continue
        counts = {}
        for f in p.faces[c]:
            for e in p.faces[f]:
                counts[e] = counts.get(e, 0) + 1
        bad = [e for e, k in counts.items() if k != 2]
        if bad:
            diamond_ok = False
            diamond_msg = f"cell {c}: face {bad[0]} lies under {counts[bad[0]]} facets"
            break
    add("diamond", diamond_ok, diamond_msg)

    chi = sum((-1) ** d for _, d in p.cells)
    chi_want = 1 + (-1) ** n
    add("euler-characteristic", chi == chi_want, f"chi={chi}, expected {chi_want}")

    if not (pure and edges_ok and diamond_ok):
        return ValidationReport("sphere", checks)

    oc = order_complex(p)
    add("order-complex-homology", has_sphere_homology(oc, n, ring="Z"),
        f"order complex is not a homology {n}-sphere over Z")

    bad_cell = None
    for c, d in p.cells:
        if d < 1:
            continue
        ideal = p.below(c)
        sub = p.restriction(ideal)
        if not has_sphere_homology(order_complex(sub), d - 1, ring="Q"):
            bad_cell = (c, d)
            break
    add("cell-boundaries", bad_cell is None,
        "" if bad_cell is None else
        f"boundary of cell {bad_cell[0]} is not a homology {bad_cell[1]-1}-sphere")

    bad_link = None
    for c, d in p.cells:
        if d > n - 1:
            continue
        up = p.above(c)
        sub = p.restriction(up)
        if not has_sphere_homology(order_complex(sub), n - d - 1, ring="Q"):
            bad_link = (c, d)
            break
    add("cell-links", bad_link is None,
        "" if bad_link is None else
        f"link of cell {bad_link[0]} is not a homology {n-bad_link[1]-1}-sphere")

    return ValidationReport("sphere", checks)


@dataclass
class BasedChainComplex:
    """Rational chain complex of a sphere with augmentation and orientation."""
    n: int
    dims: list           # dims[j] = rank of degree j, j = 0..n
    gamma: list          # gamma[j]: degree j -> j-1 for j = 1..n (gamma[0] is None)
    p0: Matrix           # 1 x w augmentation row
    i_n: Matrix          # f x 1 fundamental class column


class SphereComplex:
    """Validated, oriented spherical cell complex with based boundary matrices."""

    def __init__(self, poset: CellPoset, n: int, gamma, fund_class):
        self.poset = poset
        self.n = n
        self.gamma = list(gamma)            # index j = 1..n; gamma[0] is None
        self.fund_class = tuple(fund_class)
        self.w = len(poset.cells_of_dim(0))
        self.f = len(poset.cells_of_dim(n))
        for j in range(2, n + 1):
            prod = self.gamma[j - 1] @ self.gamma[j]
            if not prod.is_zero():
                raise SignInconsistency(f"gamma_{j-1} gamma_{j} != 0")
        if not (self.p0_row() @ self.gamma[1]).is_zero():
            raise SignInconsistency("augmentation is not killed by gamma_1")
        if not (self.gamma[n] @ self.i_n_col()).is_zero():
            raise SignInconsistency("fundamental class is not a cycle")

    def dims(self):
        return [len(self.poset.cells_of_dim(j)) for j in range(self.n + 1)]

    def p0_row(self) -> Matrix:
        return Matrix([[1] * self.w])

    def i_n_col(self) -> Matrix:
        return Matrix.column(self.fund_class)

    def orientation_sign(self, j: int) -> int:
        """Sign of top cell j relative to the fundamental class."""
        return self.fund_class[j]

    def basis(self, j: int):
        return self.poset.cells_of_dim(j)

    def cell_index(self, c):
        return self.poset.index[c]

    def __repr__(self):
        return f"SphereComplex(n={self.n}, counts={[len(self.basis(j)) for j in range(self.n+1)]})"


def orient(p: CellPoset, n: int | None = None, check: bool = True) -> SphereComplex:
    """Choose consistent incidence signs and a fundamental class.

    Signs are propagated cell by cell through the diamond relations: the
    lexicographically first covering face gets +1 and the rest follow by
    walking the facet-ridge graph of the cell's boundary; a contradictory
    cycle raises SignInconsistency. Any consistent choice is acceptable
    downstream (final cocycle values do not depend on it).
    """
    if n is None:
        n = p.dim
    if check:
        validate_sphere(p, n).raise_if_failed()
    inc = {}
    for k in range(1, n + 1):
        for c in p.cells_of_dim(k):
            faces = sorted(set(p.faces[c]))
            if k == 1:
                inc[(c, faces[0])] = 1
                inc[(c, faces[1])] = -1
                continue
            # facet-ridge adjacency within the boundary of c
            ridge_pairs = {}
            for f in faces:
                for e in p.faces[f]:
                    ridge_pairs.setdefault(e, []).append(f)
            adj = {f: [] for f in faces}
            for e, pair in ridge_pairs.items():
                if len(pair) != 2:
                    raise SignInconsistency(
                        f"cell {c}: ridge {e} under {len(pair)} facets")
                d1, d2 = pair
                adj[d1].append((d2, e))
                adj[d2].append((d1, e))
            for root in faces:
                if (c, root) in inc:
                    continue
                inc[(c, root)] = 1
                stack = [root]
                while stack:
                    d1 = stack.pop()
                    s1 = inc[(c, d1)]
                    for d2, e in adj[d1]:
                        want = -s1 * inc[(d1, e)] * inc[(d2, e)]
                        got = inc.get((c, d2))
                        if got is None:
                            inc[(c, d2)] = want
                            stack.append(d2)
                        elif got != want:
                            raise SignInconsistency(
                                f"cell {c}: contradictory signs around ridge {e}")
    gamma = [None]
    for j in range(1, n + 1):
        rows = p.cells_of_dim(j - 1)
        cols = p.cells_of_dim(j)
        ridx = {c: i for i, c in enumerate(rows)}
        m = [[0] * len(cols) for _ in rows]
        for jj, c in enumerate(cols):
            for f in set(p.faces[c]):
                m[ridx[f]][jj] = inc[(c, f)]
        gamma.append(Matrix(m) if rows else Matrix.zeros(0, len(cols)))
    for j in range(2, n + 1):
        if not (gamma[j - 1] @ gamma[j]).is_zero():
            raise SignInconsistency(f"no consistent signs: gamma_{j-1} gamma_{j} != 0")
    ker = gamma[n].kernel()
    if ker.cols != 1:
        raise InvalidComplex(f"top-degree cycle space has rank {ker.cols}, expected 1")
    vec = ker.column_list(0)
    den = 1
    for x in vec:
        if isinstance(x, Fraction):
            den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    ints = [x // g for x in ints]
    if any(abs(x) != 1 for x in ints):
        raise InvalidComplex("fundamental class entries are not all +-1")
    if ints[0] < 0:
        ints = [-x for x in ints]
    return SphereComplex(p, n, gamma, ints)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def dual(s: SphereComplex) -> SphereComplex:
    """Opposite poset with transposed, degree-reflected boundary matrices.

    The only sign normalization needed is at dual degree 0, where the top
    cells of s are weighted by their orientation relative to [S] so that the
    dual augmentation identity holds; the dual fundamental class is the
    all-ones vector over the vertices of s.
    """
    n = s.n
    p = s.poset
    cells = [(c, n - d) for c, d in sorted(p.cells, key=lambda cd: (n - cd[1], p.index[cd[0]][1]))]
    covers = [(c, f) for f, c in p.covers]
    op = CellPoset(cells, covers)
    signs = Matrix.diagonal(s.fund_class)
    gamma = [None]
    for j in range(1, n + 1):
        g = s.gamma[n - j + 1].transpose()
        if j == 1:
            g = signs @ g
        gamma.append(g)
    fund = [1] * s.w
    return SphereComplex(op, n, gamma, fund)


def chain_sphere(s: SphereComplex) -> BasedChainComplex:
    """The based rational chain complex of an oriented sphere complex."""
    bc = BasedChainComplex(
        n=s.n,
        dims=s.dims(),
        gamma=list(s.gamma),
        p0=s.p0_row(),
        i_n=s.i_n_col(),
    )
    assert (bc.p0 @ bc.gamma[1]).is_zero()
    assert (bc.gamma[s.n] @ bc.i_n).is_zero()
    return bc


def reverse_orientation(s: SphereComplex) -> SphereComplex:
    return SphereComplex(s.poset, s.n, s.gamma, [-x for x in s.fund_class])


def flip_cell(s: SphereComplex, cell_id: str) -> SphereComplex:
    """Flip the orientation convention of one cell (a different valid basis)."""
    d, i = s.poset.index[cell_id]
    gamma = [None]
    for j in range(1, s.n + 1):
        g = s.gamma[j]
        if j == d:
            flip = Matrix.diagonal([-1 if k == i else 1 for k in range(g.cols)])
            g = g @ flip
        elif j == d + 1:
            flip = Matrix.diagonal([-1 if k == i else 1 for k in range(g.rows)])
            g = flip @ g
        gamma.append(g)
    fund = list(s.fund_class)
    if d == s.n:
        fund[i] = -fund[i]
    return SphereComplex(s.poset, s.n, gamma, fund)


def permute_cells(p: CellPoset, perms) -> CellPoset:
    """Reorder the per-dimension cell bases; perms maps dim -> list of ids."""
    order = []
    for d in sorted(p.by_dim):
        ids = perms.get(d, p.by_dim[d])
        if sorted(ids) != sorted(p.by_dim[d]):
            raise ValueError(f"permutation for dim {d} is not a permutation")
        order.extend((c, d) for c in ids)
    return CellPoset(order, p.covers)
