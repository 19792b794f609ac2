"""Exact dense matrix kernel over the rationals.

Entries are Python ints or ``fractions.Fraction`` in lowest terms (Fraction
values that happen to be integral are stored as int, which keeps the common
integer paths fast). Matrices are immutable after construction and all
operations are pure functions, so values can be shared freely across threads.

Elimination-based routines (det, rank, inv) use fraction-free Bareiss-style
pivoting on integer-scaled rows to control coefficient growth. rank() and
smith_normal_form() prefer unit pivots and sparse row storage; the results are
independent of those internals.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SingularMatrix

__all__ = [
    "Matrix",
    "block_matrix",
    "betti_numbers",
    "smith_normal_form",
]


def _norm(x):
    """Return x as int when integral, Fraction otherwise."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return int(x)
    raise TypeError(f"matrix entries must be int or Fraction, got {type(x).__name__}")


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Immutable dense matrix with exact rational entries.

    A 0 x k or k x 0 matrix is legal and acts as the unique empty map.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, shape=None):
        data = tuple(tuple(_norm(x) for x in row) for row in rows)
        if data:
            ncols = len(data[0])
            if any(len(row) != ncols for row in data):
                raise ValueError("ragged rows")
            self.rows, self.cols = len(data), ncols
        else:
            if shape is None:
                self.rows, self.cols = 0, 0
            else:
                self.rows, self.cols = shape
                if self.rows != 0:
                    raise ValueError("nonzero row count with no row data")
        self.data = data

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        if rows == 0:
            return Matrix((), shape=(0, cols))
        return Matrix([[0] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def column(entries) -> "Matrix":
        return Matrix([[x] for x in entries])

    @staticmethod
    def row_vector(entries) -> "Matrix":
        return Matrix([list(entries)])

    @staticmethod
    def diagonal(entries) -> "Matrix":
        entries = list(entries)
        n = len(entries)
        return Matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    # -- basics --------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        if self.rows == 0 or self.cols == 0:
            return f"Matrix(shape={self.shape})"
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix[{body}]"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_integral(self) -> bool:
        return all(type(x) is int for row in self.data for x in row)

    def column_list(self, j: int):
        return [row[j] for row in self.data]

    def transpose(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return Matrix.zeros(self.cols, self.rows)
        return Matrix(list(zip(*self.data)))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __neg__(self):
        return Matrix([[-x for x in row] for row in self.data], shape=self.shape)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            shape=self.shape,
        )

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            shape=self.shape,
        )

    def scale(self, c) -> "Matrix":
        c = _norm(c) if not isinstance(c, Fraction) else c
        return Matrix([[c * x for x in row] for row in self.data], shape=self.shape)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.rows, other.cols)
        bdata = other.data
        ncols = other.cols
        out = []
        for arow in self.data:
            acc = [0] * ncols
            for k, a in enumerate(arow):
                if not a:
                    continue
                brow = bdata[k]
                if a == 1:
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] += b
                elif a == -1:
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] -= b
                else:
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] += a * b
            out.append([v if type(v) is int else _norm(v) for v in acc])
        return Matrix(out)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        if not row_idx:
            return Matrix.zeros(0, len(col_idx))
        return Matrix([[self.data[i][j] for j in col_idx] for i in row_idx])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        if self.rows == 0:
            return Matrix.zeros(0, self.cols + other.cols)
        return Matrix([ra + rb for ra, rb in zip(self.data, other.data)])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return Matrix(self.data + other.data, shape=(self.rows + other.rows, self.cols))

    # -- integer scaling ----------------------------------------------

    def _int_rows(self):
        """Rows scaled to integers (row scaling preserves rank and row space)."""
        rows = []
        for row in self.data:
            den = 1
            for x in row:
                if type(x) is not int:
                    d = x.denominator
                    den = den * d // _gcd(den, d)
            if den == 1:
                rows.append([x if type(x) is int else x.numerator for x in row])
            else:
                rows.append([int(x * den) for x in row])
        return rows

    # -- elimination-backed operations ---------------------------------

    def det(self) -> Fraction:
        """Exact determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Fraction(1)
        scale = Fraction(1)
        a = []
        for row in self.data:
            den = 1
            for x in row:
                if type(x) is not int:
                    d = x.denominator
                    den = den * d // _gcd(den, d)
            scale *= den
            a.append([int(x * den) if type(x) is not int else x * den for x in row]
                     if den != 1 else [x if type(x) is int else x.numerator for x in row])
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            p = a[k][k]
            for i in range(k + 1, n):
                ai, ak = a[i], a[k]
                c = ai[k]
                for j in range(k + 1, n):
                    ai[j] = (p * ai[j] - c * ak[j]) // prev
                ai[k] = 0
            prev = p
        return _norm(Fraction(sign * a[n - 1][n - 1], 1) / scale)

    def rank(self) -> int:
        """Exact rank via sparse elimination with unit-pivot preference.

        Unit pivots need no division at all; the rare non-unit pivot falls
        back to exact rational row operations.
        """
        rows = [
            {j: v for j, v in enumerate(r) if v} for r in self._int_rows()
        ]
        rows = [r for r in rows if r]
        rank = 0
        while rows:
            pivot_i = pivot_j = None
            best = None
            for i, r in enumerate(rows):
                for j, v in r.items():
                    key = (0 if abs(v) == 1 else 1, len(r), abs(v), i, j)
                    if best is None or key < best:
                        best, pivot_i, pivot_j = key, i, j
            prow = rows.pop(pivot_i)
            p = prow[pivot_j]
            rank += 1
            nxt = []
            unit = abs(p) == 1
            for r in rows:
                c = r.pop(pivot_j, 0)
                if c:
                    f = c * p if unit else Fraction(c, p)
                    for j, v in prow.items():
                        if j == pivot_j:
                            continue
                        w = r.get(j, 0) - f * v
                        if w:
                            r[j] = w if type(w) is int else _norm(w)
                        elif j in r:
                            del r[j]
                if r:
                    nxt.append(r)
            rows = nxt
        return rank

    def inv(self) -> "Matrix":
        """Exact inverse; raises SingularMatrix when the determinant is zero.

        Forward elimination is fraction-free Bareiss on integer-scaled rows;
        back substitution divides out the accumulated pivots exactly.
        """
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        if n == 0:
            return Matrix.zeros(0, 0)
        aug = []
        for i, row in enumerate(self.data):
            den = 1
            for x in row:
                if type(x) is not int:
                    d = x.denominator
                    den = den * d // _gcd(den, d)
            ints = [int(x * den) for x in row] if den != 1 else [
                x if type(x) is int else x.numerator for x in row
            ]
            aug.append(ints + [den if j == i else 0 for j in range(n)])
        prev = 1
        for k in range(n):
            if aug[k][k] == 0:
                for i in range(k + 1, n):
                    if aug[i][k]:
                        aug[k], aug[i] = aug[i], aug[k]
                        break
                else:
                    raise SingularMatrix(f"column {k} has no pivot")
            p = aug[k][k]
            for i in range(k + 1, n):
                ai, ak = aug[i], aug[k]
                c = ai[k]
                for j in range(k + 1, 2 * n):
                    ai[j] = (p * ai[j] - c * ak[j]) // prev
                ai[k] = 0
            prev = p
        # back substitution over Fraction
        out = [[Fraction(0)] * n for _ in range(n)]
        for col in range(n):
            sol = [Fraction(0)] * n
            for i in range(n - 1, -1, -1):
                s = Fraction(aug[i][n + col])
                for j in range(i + 1, n):
                    s -= aug[i][j] * sol[j]
                sol[i] = s / aug[i][i]
            for i in range(n):
                out[i][col] = sol[i]
        return Matrix(out)

    # -- reduced row echelon form and friends --------------------------

    def rref(self):
        """(R, pivot_columns) with R the reduced row echelon form over Q."""
        rows = [[_as_fraction(x) for x in row] for row in self.data]
        nrows, ncols = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(ncols):
            pr = None
            for i in range(r, nrows):
                if rows[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            p = rows[r][c]
            if p != 1:
                rows[r] = [x / p for x in rows[r]]
            for i in range(nrows):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        return Matrix(rows, shape=self.shape), tuple(pivots)

    def kernel(self) -> "Matrix":
        """Columns form a basis of the right null space (cols x nullity)."""
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.cols
            vec[f] = Fraction(1)
            for r, c in enumerate(pivots):
                vec[c] = -R.data[r][f]
            basis.append(vec)
        if not basis:
            return Matrix.zeros(self.cols, 0)
        return Matrix(basis).transpose()

    def solve(self, b: "Matrix"):
        """Solve self @ x = b.  Returns (solution or None, unique flag).

        The solution returned is the one with free variables set to zero.
        """
        if b.rows != self.rows or b.cols != 1:
            raise ValueError("right-hand side shape mismatch")
        aug = self.hstack(b)
        R, pivots = aug.rref()
        if self.cols in pivots:
            return None, True
        sol = [Fraction(0)] * self.cols
        for r, c in enumerate(pivots):
            sol[c] = R.data[r][self.cols]
        unique = len(pivots) == self.cols
        return Matrix.column(sol), unique

    def moore_penrose(self) -> "Matrix":
        """Moore-Penrose pseudoinverse via full-rank factorization.

        Factor m = F G with F the pivot columns and G the nonzero rows of the
        reduced row echelon form, then  m+ = G^T (G G^T)^-1 (F^T F)^-1 F^T.
        The zero matrix maps to the zero matrix of transposed shape.
        """
        R, pivots = self.rref()
        r = len(pivots)
        if r == 0:
            return Matrix.zeros(self.cols, self.rows)
        F = self.submatrix(range(self.rows), pivots)
        G = R.submatrix(range(r), range(self.cols))
        Ft = F.transpose()
        Gt = G.transpose()
        mp = Gt @ (G @ Gt).inv() @ (Ft @ F).inv() @ Ft
        return mp


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _xgcd(a: int, b: int):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def smith_normal_form(m: Matrix):
    """(U, D, V) with U m V = D, U and V unimodular, D diagonal, d1 | d2 | ...

    Requires integer entries. Diagonal entries are nonnegative.
    """
    if not m.is_integral():
        raise ValueError("smith_normal_form requires an integer matrix")
    nrows, ncols = m.rows, m.cols
    D = [list(row) for row in m.data]
    U = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    V = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def row_op(i1, i2, a, b, c, d):
        # (row i1, row i2) <- (a*row i1 + b*row i2, c*row i1 + d*row i2)
        for M in (D, U):
            r1, r2 = M[i1], M[i2]
            for j in range(len(r1)):
                r1[j], r2[j] = a * r1[j] + b * r2[j], c * r1[j] + d * r2[j]

    def col_op(j1, j2, a, b, c, d):
        for M in (D, V):
            for row in M:
                row[j1], row[j2] = a * row[j1] + b * row[j2], c * row[j1] + d * row[j2]

    def swap_rows(i1, i2):
        D[i1], D[i2] = D[i2], D[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        for M in (D, V):
            for row in M:
                row[j1], row[j2] = row[j2], row[j1]

    s = 0
    limit = min(nrows, ncols)
    while s < limit:
        # pick the remaining entry of least absolute value as pivot
        pi = pj = None
        best = None
        for i in range(s, nrows):
            row = D[i]
            for j in range(s, ncols):
                v = row[j]
                if v:
                    key = (abs(v), i, j)
                    if best is None or key < best:
                        best, pi, pj = key, i, j
                        if abs(v) == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if pi is None:
            break
        if pi != s:
            swap_rows(s, pi)
        if pj != s:
            swap_cols(s, pj)
        dirty = True
        while dirty:
            dirty = False
            p = D[s][s]
            for i in range(s + 1, nrows):
                a = D[i][s]
                if a:
                    if a % p == 0:
                        row_op(s, i, 1, 0, -(a // p), 1)
                    else:
                        x, y, g = _xgcd(p, a)
                        row_op(s, i, x, y, -(a // g), p // g)
                        dirty = True
                        p = g
            p = D[s][s]
            for j in range(s + 1, ncols):
                a = D[s][j]
                if a:
                    if a % p == 0:
                        col_op(s, j, 1, 0, -(a // p), 1)
                    else:
                        x, y, g = _xgcd(p, a)
                        col_op(s, j, x, y, -(a // g), p // g)
                        dirty = True
                        p = g
        s += 1

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(s - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if b % a != 0:
                # fold gcd(a, b) into slot i and lcm(a, b) into slot i+1
                col_op(i, i + 1, 1, 1, 0, 1)  # col i += col i+1
                x, y, g = _xgcd(a, b)
                row_op(i, i + 1, x, y, -(b // g), a // g)
                rem = D[i][i + 1]
                assert rem % g == 0, "SNF divisibility cleanup failed"
                q = rem // g
                if q:
                    col_op(i + 1, i, 1, -q, 0, 1)  # col i+1 -= q * col i
                changed = True
    for i in range(s):
        if D[i][i] < 0:
            for M in (D, U):
                M[i] = [-x for x in M[i]]

    Um, Dm, Vm = Matrix(U), Matrix(D, shape=(nrows, ncols)), Matrix(V)
    assert (Um @ m @ Vm) == Dm, "SNF internal identity failed"
    return Um, Dm, Vm


def block_matrix(row_sizes, col_sizes, blocks) -> Matrix:
    """Assemble a matrix from a {(bi, bj): Matrix} dict of blocks."""
    row_sizes, col_sizes = list(row_sizes), list(col_sizes)
    nrows, ncols = sum(row_sizes), sum(col_sizes)
    row_off = [0]
    for s in row_sizes:
        row_off.append(row_off[-1] + s)
    col_off = [0]
    for s in col_sizes:
        col_off.append(col_off[-1] + s)
    grid = [[0] * ncols for _ in range(nrows)]
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {blk.shape}, "
                             f"expected {(row_sizes[bi], col_sizes[bj])}")
        r0, c0 = row_off[bi], col_off[bj]
        for i, row in enumerate(blk.data):
            grid_row = grid[r0 + i]
            for j, v in enumerate(row):
                if v:
                    grid_row[c0 + j] = v
    if nrows == 0:
        return Matrix.zeros(0, ncols)
    return Matrix(grid)


def betti_numbers(dims, boundaries):
    """Betti numbers of a chain complex given per-degree boundary matrices.

    dims[k] is the rank of the degree-k module; boundaries[k] maps degree k
    to degree k-1 (entry 0 and entries beyond the top may be None).
    """
    top = len(dims) - 1
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        bk = boundaries[k] if k < len(boundaries) else None
        ranks[k] = bk.rank() if bk is not None else 0
    return [dims[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]
