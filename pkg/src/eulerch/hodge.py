"""Combinatorial Hodge retractions of sphere chain complexes onto homology.

The splitting data <F, i, p> exhibits the based rational chain complex of an
oriented cellular n-sphere as its homology plus a contractible summand:

    pi = Id,  dF + Fd = Id - ip,  Fi = 0, pF = 0, FF = 0.

The homotopy F is built from graph Laplacians of the boundary matrices and
their Green operators; it coincides with the Moore-Penrose pseudoinverse of
the differential, which an independent rank-factorization route cross-checks.
The module also provides generic splittings (deterministic and randomized)
and the basic perturbation lemma for filtered graded complexes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cellx import SphereComplex, ValidationReport, chain_sphere
from .errors import (
    InvalidComplex,
    NotADifferential,
    NotNilpotent,
    SingularMatrix,
)
from .ratlin import Matrix

__all__ = [
    "SdrData",
    "laplacian",
    "green",
    "dagger",
    "build_sdr",
    "pseudo_sdr",
    "split_sdr",
    "verify_sdr",
    "GradedComplex",
    "GradedSDR",
    "verify_graded_sdr",
    "bpl_perturb",
]


@dataclass
class SdrData:
    """Strong deformation retraction of a sphere complex onto H(S^n; Q)."""
    complex: object          # BasedChainComplex
    F: list                  # F[j]: R_{j-1} -> R_j for j = 1..n; F[0] is None
    i0: Matrix               # Q_0 -> R_0
    i_n: Matrix              # Q_n -> R_n (the fundamental class)
    p0: Matrix               # R_0 -> Q_0 (the augmentation)
    p_n: Matrix              # R_n -> Q_n


def laplacian(s: SphereComplex, j: int) -> Matrix:
    """Combinatorial Laplacian in degree j (missing boundaries act as zero)."""
    if not 0 <= j <= s.n:
        raise ValueError(f"degree {j} out of range 0..{s.n}")
    dims = s.dims()
    out = Matrix.zeros(dims[j], dims[j])
    if j >= 1:
        g = s.gamma[j]
        out = out + g.transpose() @ g
    if j + 1 <= s.n:
        g = s.gamma[j + 1]
        out = out + g @ g.transpose()
    return out


def _i_j(s: SphereComplex, j: int) -> Matrix:
    if j == 0:
        return Matrix.column([Fraction(1, s.w)] * s.w)
    if j == s.n:
        return s.i_n_col()
    raise ValueError("i_j is only defined at the ends")


def _p_j(s: SphereComplex, j: int) -> Matrix:
    if j == 0:
        return s.p0_row()
    if j == s.n:
        f = s.f
        return Matrix([[Fraction(s.orientation_sign(k), f) for k in range(f)]])
    raise ValueError("p_j is only defined at the ends")


def green(s: SphereComplex, j: int) -> Matrix:
    """Green operator: inverse of the Laplacian, corrected by i p at the ends
    where homology makes the Laplacian singular."""
    lap = laplacian(s, j)
    if j in (0, s.n):
        lap = lap + _i_j(s, j) @ _p_j(s, j)
    try:
        return lap.inv()
    except SingularMatrix as exc:
        raise SingularMatrix(
            f"degree-{j} Laplacian not invertible: complex is not homologically "
            f"spherical") from exc


def dagger(s: SphereComplex, j: int) -> Matrix:
    """Hodge homotopy gamma_j^T G_{j-1}; equals moore_penrose(gamma_j)."""
    if not 1 <= j <= s.n:
        raise ValueError(f"degree {j} out of range 1..{s.n}")
    return s.gamma[j].transpose() @ green(s, j - 1)


def build_sdr(s: SphereComplex) -> SdrData:
    """Hodge splitting: F_j = gamma_j^T G_{j-1}, i_0 = (1/w)(1..1)^T,
    i_n = [S], p_0 = (1..1), p_n = (1/f)(orientation signs)."""
    F = [None] + [dagger(s, j) for j in range(1, s.n + 1)]
    sdr = SdrData(
        complex=chain_sphere(s),
        F=F,
        i0=_i_j(s, 0),
        i_n=_i_j(s, s.n),
        p0=_p_j(s, 0),
        p_n=_p_j(s, s.n),
    )
    verify_sdr(sdr).raise_if_failed(InvalidComplex)
    return sdr


def pseudo_sdr(s: SphereComplex) -> SdrData:
    """Independent route: every operator is a rank-factorization pseudoinverse."""
    F = [None] + [s.gamma[j].moore_penrose() for j in range(1, s.n + 1)]
    sdr = SdrData(
        complex=chain_sphere(s),
        F=F,
        i0=s.p0_row().moore_penrose(),
        i_n=s.i_n_col(),
        p0=s.p0_row(),
        p_n=s.i_n_col().moore_penrose(),
    )
    verify_sdr(sdr).raise_if_failed(InvalidComplex)
    return sdr


def split_sdr(s: SphereComplex, rng: random.Random | None = None) -> SdrData:
    """Splitting from explicit complements of cycles and boundaries.

    With rng=None the complements come from pivot columns (a deterministic
    spanning-tree style splitting); with an rng they are sheared by random
    cycle directions, giving a genuinely different verified SDR. The
    augmentation row and the fundamental class stay fixed.
    """
    n = s.n
    dims = s.dims()
    gamma = s.gamma

    def rand_frac():
        return Fraction(rng.randint(-2, 2))

    # A[j]: basis matrix of a complement of ker gamma_j inside R_j (j>=1)
    A = [None] * (n + 1)
    for j in range(1, n + 1):
        _, pivots = gamma[j].rref()
        cols = []
        ker = gamma[j].kernel()
        for c in pivots:
            vec = [Fraction(1) if r == c else Fraction(0) for r in range(dims[j])]
            if rng is not None and ker.cols:
                shear = [rand_frac() for _ in range(ker.cols)]
                for r in range(dims[j]):
                    vec[r] += sum(ker[r, kk] * shear[kk] for kk in range(ker.cols))
            cols.append(vec)
        A[j] = Matrix(cols).transpose() if cols else Matrix.zeros(dims[j], 0)

    # harmonic representative in degree 0: anything with augmentation 1
    h0 = Matrix.column([Fraction(1, s.w)] * s.w)
    if rng is not None:
        b0 = gamma[1] @ Matrix.column([rand_frac() for _ in range(dims[1])])
        h0 = h0 + b0

    F = [None] * (n + 1)
    for j in range(1, n + 1):
        m = gamma[j] @ A[j]                      # basis of boundaries in R_{j-1}
        blocks = [m]
        if j - 1 >= 1:
            blocks.append(A[j - 1])
        if j - 1 == 0:
            blocks.append(h0)
        T = blocks[0]
        for b in blocks[1:]:
            T = T.hstack(b)
        if T.rows != T.cols:
            raise InvalidComplex("complement dimensions do not add up")
        Tinv = T.inv()
        # F on degree j-1: invert gamma on the boundary block, kill the rest
        lift = A[j].hstack(Matrix.zeros(dims[j], T.cols - m.cols))
        F[j] = lift @ Tinv
    # p_n: coefficient of [S] in the decomposition R_n = A_n + span[S]
    T = A[n].hstack(s.i_n_col())
    Tinv = T.inv()
    p_n = Matrix([Tinv.data[T.cols - 1]])

    sdr = SdrData(
        complex=chain_sphere(s),
        F=F,
        i0=h0,
        i_n=s.i_n_col(),
        p0=s.p0_row(),
        p_n=p_n,
    )
    verify_sdr(sdr).raise_if_failed(InvalidComplex)
    return sdr


def verify_sdr(d: SdrData) -> ValidationReport:
    """Check every splitting identity by exact matrix arithmetic."""
    bc = d.complex
    n = bc.n
    checks = []

    def add(name, ok):
        checks.append((name, bool(ok), "" if ok else "exact identity fails"))

    gamma = bc.gamma
    add("p0 i0 = 1", d.p0 @ d.i0 == Matrix([[1]]))
    add("pn in = 1", d.p_n @ d.i_n == Matrix([[1]]))
    add("p0 gamma1 = 0", (d.p0 @ gamma[1]).is_zero())
    add("gamman in = 0", (gamma[n] @ d.i_n).is_zero())
    for j in range(2, n + 1):
        add(f"gamma{j-1} gamma{j} = 0", (gamma[j - 1] @ gamma[j]).is_zero())

    add("gamma1 F1 + i0 p0 = Id",
        gamma[1] @ d.F[1] + d.i0 @ d.p0 == Matrix.identity(bc.dims[0]))
    add("in pn + Fn gamman = Id",
        d.i_n @ d.p_n + d.F[n] @ gamma[n] == Matrix.identity(bc.dims[n]))
    for j in range(2, n + 1):
        add(f"gamma{j} F{j} + F{j-1} gamma{j-1} = Id",
            gamma[j] @ d.F[j] + d.F[j - 1] @ gamma[j - 1]
            == Matrix.identity(bc.dims[j - 1]))

    add("pn Fn = 0", (d.p_n @ d.F[n]).is_zero())
    add("F1 i0 = 0", (d.F[1] @ d.i0).is_zero())
    for j in range(1, n):
        add(f"F{j+1} F{j} = 0", (d.F[j + 1] @ d.F[j]).is_zero())
    return ValidationReport("sdr", checks)


# -- graded complexes and the basic perturbation lemma -------------------


@dataclass
class GradedComplex:
    """Nonnegatively graded free module with a degree -1 differential."""
    dims: list      # dims[k] for k = 0..top
    d: dict         # d[k]: degree k -> k-1 (absent entries are zero)

    @property
    def top(self):
        return len(self.dims) - 1

    def dim(self, k):
        return self.dims[k] if 0 <= k <= self.top else 0

    def diff(self, k) -> Matrix:
        m = self.d.get(k)
        if m is None:
            return Matrix.zeros(self.dim(k - 1), self.dim(k))
        return m

    def check_square_zero(self):
        for k in range(1, self.top + 1):
            if not (self.diff(k - 1) @ self.diff(k)).is_zero():
                return False
        return True

    def betti(self):
        from .ratlin import betti_numbers
        return betti_numbers(self.dims, [None] + [self.diff(k) for k in range(1, self.top + 1)])


@dataclass
class GradedSDR:
    """Filtered SDR of a graded complex `big` onto `small`.

    i[k]: small_k -> big_k, p[k]: big_k -> small_k, F[k]: big_k -> big_{k+1}.
    """
    big: GradedComplex
    small: GradedComplex
    i: dict
    p: dict
    F: dict

    def i_mat(self, k):
        m = self.i.get(k)
        return m if m is not None else Matrix.zeros(self.big.dim(k), self.small.dim(k))

    def p_mat(self, k):
        m = self.p.get(k)
        return m if m is not None else Matrix.zeros(self.small.dim(k), self.big.dim(k))

    def F_mat(self, k):
        m = self.F.get(k)
        return m if m is not None else Matrix.zeros(self.big.dim(k + 1), self.big.dim(k))


def verify_graded_sdr(sdr: GradedSDR, big_d=None, small_d=None) -> ValidationReport:
    """Exact verification of all SDR identities, degree by degree.

    big_d / small_d override the stored differentials (used to re-verify the
    output of the perturbation lemma against the perturbed differentials).
    """
    big, small = sdr.big, sdr.small
    bd = big_d if big_d is not None else {k: big.diff(k) for k in range(big.top + 1)}
    sd = small_d if small_d is not None else {k: small.diff(k) for k in range(small.top + 1)}

    def bdiff(k):
        m = bd.get(k)
        return m if m is not None else Matrix.zeros(big.dim(k - 1), big.dim(k))

    def sdiff(k):
        m = sd.get(k)
        return m if m is not None else Matrix.zeros(small.dim(k - 1), small.dim(k))

    checks = []

    def add(name, ok):
        checks.append((name, bool(ok), "" if ok else "exact identity fails"))

    for k in range(big.top + 1):
        add(f"p i = Id [deg {k}]",
            sdr.p_mat(k) @ sdr.i_mat(k) == Matrix.identity(small.dim(k)))
        lhs = bdiff(k + 1) @ sdr.F_mat(k) + sdr.F_mat(k - 1) @ bdiff(k)
        rhs = Matrix.identity(big.dim(k)) - sdr.i_mat(k) @ sdr.p_mat(k)
        add(f"dF + Fd = Id - ip [deg {k}]", lhs == rhs)
        add(f"F i = 0 [deg {k}]", (sdr.F_mat(k) @ sdr.i_mat(k)).is_zero())
        add(f"p F = 0 [deg {k}]", (sdr.p_mat(k + 1) @ sdr.F_mat(k)).is_zero())
        add(f"F F = 0 [deg {k}]", (sdr.F_mat(k + 1) @ sdr.F_mat(k)).is_zero())
        add(f"p chain map [deg {k}]",
            sdr.p_mat(k - 1) @ bdiff(k) == sdiff(k) @ sdr.p_mat(k))
        add(f"i chain map [deg {k}]",
            bdiff(k) @ sdr.i_mat(k) == sdr.i_mat(k - 1) @ sdiff(k))
    return ValidationReport("graded sdr", checks)


def bpl_perturb(sdr: GradedSDR, psi: dict, cap: int | None = None):
    """Basic perturbation lemma.

    psi[k]: big_k -> big_{k-1} is the perturbation; (d + psi) must square to
    zero and F psi must be nilpotent within `cap` steps (default: number of
    degrees plus one; exceeding the cap is an error, never a truncation).

    Returns (d_psi, p_psi, i_psi, F_psi) as per-degree matrix dicts, where
    d_psi is the increment added to the small differential. The perturbed
    data is re-verified exactly before returning.
    """
    big, small = sdr.big, sdr.small
    top = big.top
    if cap is None:
        cap = top + 2

    def psi_mat(k):
        m = psi.get(k)
        return m if m is not None else Matrix.zeros(big.dim(k - 1), big.dim(k))

    pert = {k: big.diff(k) + psi_mat(k) for k in range(top + 2)}
    for k in range(1, top + 1):
        if not (pert[k - 1] @ pert[k]).is_zero():
            raise NotADifferential(f"(d + psi)^2 != 0 entering degree {k}")

    # sigma[k] = sum_j (-1)^j (F psi)^j in degree k, a finite sum
    sigma = {}
    for k in range(top + 1):
        nk = big.dim(k)
        acc = Matrix.identity(nk)
        term = Matrix.identity(nk)
        step = sdr.F_mat(k - 1) @ psi_mat(k)
        count = 0
        while True:
            term = step @ term
            if term.is_zero():
                break
            count += 1
            if count > cap:
                raise NotNilpotent(
                    f"F psi did not vanish within {cap} steps in degree {k}")
            acc = acc + (term if count % 2 == 0 else -term)
        sigma[k] = acc

    d_psi = {}
    i_psi = {}
    p_psi = {}
    F_psi = {}
    for k in range(top + 1):
        i_psi[k] = sigma[k] @ sdr.i_mat(k)
        F_psi[k] = sigma[k + 1] @ sdr.F_mat(k) if k + 1 <= top else sdr.F_mat(k)
        p_psi[k] = sdr.p_mat(k) - (
            sdr.p_mat(k) @ psi_mat(k + 1) @ sigma.get(k + 1, Matrix.identity(big.dim(k + 1))) @ sdr.F_mat(k)
            if k + 1 <= top else Matrix.zeros(small.dim(k), big.dim(k))
        )
        d_psi[k] = sdr.p_mat(k - 1) @ psi_mat(k) @ sigma[k] @ sdr.i_mat(k)

    new_small = {k: small.diff(k) + d_psi[k] for k in range(top + 1)}
    for k in range(1, top + 1):
        if not (new_small.get(k - 1, Matrix.zeros(small.dim(k - 2), small.dim(k - 1))) @ new_small[k]).is_zero():
            raise NotADifferential(f"perturbed small differential fails d^2=0 at {k}")
    out_sdr = GradedSDR(big=big, small=small, i=i_psi, p=p_psi, F=F_psi)
    report = verify_graded_sdr(out_sdr, big_d=pert, small_d=new_small)
    report.raise_if_failed(NotADifferential)
    return d_psi, p_psi, i_psi, F_psi
