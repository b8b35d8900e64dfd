"""Eigenvalue matching and Hoffman-Wielandt type inequality verdicts.

The central check: for diagonalizable C with eigenvector matrix X and any D of
the same size there is a permutation pi with

    sum_i |alpha_i - beta_pi(i)|^2 <= kappa(X)^2 * ||C - D||_F^2.

`best_matching` makes pi constructive by solving the assignment problem, so a
claim that the plain inequality (kappa = 1) fails can be checked exactly.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import numkit as nk
from .companion import (
    diagonalizability_report,
    ds_2x2,
    lift_eigenvector,
)
from .errors import (
    DegenerateParameters,
    LengthMismatch,
    NotDiagonalizable,
    NotHermitian,
    NotPositiveDefinite,
    TooLarge,
)
from .matpoly import MatrixPolynomial, companion_array
from .numkit import DEFAULT_TOL, Tolerances

BRUTE_LIMIT = 10


@dataclass(frozen=True)
class Assignment:
    permutation: tuple  # alphas[i] is matched with betas[permutation[i]]
    cost: float


def cost_matrix(alphas, betas) -> np.ndarray:
    a = np.asarray(alphas, dtype=np.complex128).ravel()
    b = np.asarray(betas, dtype=np.complex128).ravel()
    if a.shape != b.shape:
        raise LengthMismatch(f"{a.size} eigenvalues vs {b.size}")
    if a.size == 0:
        raise LengthMismatch("empty eigenvalue sequences")
    return np.abs(a[:, None] - b[None, :]) ** 2


def _cost_of(c: np.ndarray, perm) -> float:
    return float(sum(c[i, j] for i, j in enumerate(perm)))


def _hungarian(c: np.ndarray) -> tuple:
    """Minimum-cost perfect matching on a square cost matrix, O(k^3).

    Shortest augmenting path with row/column potentials; among equal
    reductions the lowest column index is taken.
    """
    k = c.shape[0]
    inf = math.inf
    u = [0.0] * (k + 1)
    v = [0.0] * (k + 1)
    match = [0] * (k + 1)  # match[j] = row (1-based) assigned to column j
    way = [0] * (k + 1)
    for i in range(1, k + 1):
        match[0] = i
        j0 = 0
        minv = [inf] * (k + 1)
        used = [False] * (k + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta, j1 = inf, -1
            for j in range(1, k + 1):
                if used[j]:
                    continue
                cur = c[i0 - 1, j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta, j1 = minv[j], j
            for j in range(k + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    perm = [0] * k
    for j in range(1, k + 1):
        perm[match[j] - 1] = j - 1
    return tuple(perm)


def best_matching(alphas, betas) -> Assignment:
    """Permutation minimizing sum |alpha_i - beta_pi(i)|^2."""
    c = cost_matrix(alphas, betas)
    perm = _hungarian(c)
    return Assignment(perm, _cost_of(c, perm))


def worst_matching(alphas, betas) -> Assignment:
    c = cost_matrix(alphas, betas)
    perm = _hungarian(c.max() - c)
    return Assignment(perm, _cost_of(c, perm))


def brute_matching(alphas, betas) -> Assignment:
    """Exhaustive minimum over all k! permutations; test oracle for small k."""
    c = cost_matrix(alphas, betas)
    k = c.shape[0]
    if k > BRUTE_LIMIT:
        raise TooLarge(f"brute force limited to k <= {BRUTE_LIMIT}, got {k}")
    perms = np.array(list(permutations(range(k))))
    costs = c[np.arange(k), perms].sum(axis=1)
    best = tuple(int(j) for j in perms[int(np.argmin(costs))])  # first minimum in lexicographic order
    return Assignment(best, _cost_of(c, best))


@dataclass(frozen=True)
class HWReport:
    alphas: np.ndarray
    betas: np.ndarray
    best: Assignment
    worst_cost: float
    frob_sq: float
    kappa_sq: float
    rhs: float
    holds_plain: bool
    holds_kappa: bool
    tolerances: Tolerances = DEFAULT_TOL
    # how the diagonalizer was obtained: "certificate", "supplied", or None (plain check)
    x_source: str | None = None
    diag_residual: float | None = None  # ||X^{-1} C X - diag|| / ||C||_F
    x_diagonalizes: bool | None = None
    anomaly: bool = False
    # equality check extras (commuting normal inputs)
    normal: bool | None = None
    commuting: bool | None = None
    paired_cost: float | None = None  # cost of the joint-eigenbasis pairing
    equality_gap: float | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def cplx(values):
            return [[float(z.real), float(z.imag)] for z in np.asarray(values)]

        out = {
            "alphas": cplx(self.alphas),
            "betas": cplx(self.betas),
            "best": {"permutation": list(self.best.permutation), "cost": self.best.cost},
            "worst_cost": self.worst_cost,
            "frob_sq": self.frob_sq,
            "kappa_sq": self.kappa_sq,
            "rhs": self.rhs,
            "holds_plain": self.holds_plain,
            "holds_kappa": self.holds_kappa,
            "anomaly": self.anomaly,
            "tolerances": self.tolerances.as_dict(),
        }
        for key in ("x_source", "diag_residual", "x_diagonalizes", "normal", "commuting",
                    "paired_cost", "equality_gap"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _verdicts(cost, frob_sq, kappa_sq, tol):
    rhs = kappa_sq * frob_sq
    # failure is only asserted beyond tolerance
    holds_plain = cost <= frob_sq + tol.tol_verify * (1.0 + frob_sq)
    holds_kappa = cost <= rhs + tol.tol_verify * (1.0 + rhs)
    return rhs, holds_plain, holds_kappa


def _pair_shapes(a, b):
    a, b = nk.as_square(a), nk.as_square(b)
    if a.shape != b.shape:
        raise LengthMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def hw_equality_check(a, b, tol: Tolerances = DEFAULT_TOL) -> HWReport:
    """Plain (kappa = 1) check plus the commuting-normal identity.

    For commuting normal a, b a common unitary eigenbasis pairs the
    eigenvalues so that sum |lambda_i - mu_i|^2 = ||a - b||_F^2 exactly; that
    pairing's cost is reported as `paired_cost`. `best` is the optimal matching,
    which can be strictly cheaper than the paired cost.
    """
    a, b = _pair_shapes(a, b)
    alphas = nk.eig_dense(a, tol).values
    betas = nk.eig_dense(b, tol).values
    best = best_matching(alphas, betas)
    worst = worst_matching(alphas, betas)
    frob_sq = nk.frobenius_norm(a - b) ** 2
    rhs, holds_plain, holds_kappa = _verdicts(best.cost, frob_sq, 1.0, tol)
    normal = nk.is_normal(a, tol) and nk.is_normal(b, tol)
    commuting = nk.commute(a, b, tol)
    paired_cost = gap = None
    notes = []
    if normal and commuting:
        _, d_a, d_b = nk.simultaneous_diag_commuting_normal(a, b, tol)
        paired_cost = float(np.sum(np.abs(d_a - d_b) ** 2))
        gap = abs(paired_cost - frob_sq)
    else:
        notes.append("inputs are not commuting normal matrices; no equality guarantee")
    anomaly = normal and not holds_plain
    return HWReport(
        alphas=alphas,
        betas=betas,
        best=best,
        worst_cost=worst.cost,
        frob_sq=frob_sq,
        kappa_sq=1.0,
        rhs=rhs,
        holds_plain=holds_plain,
        holds_kappa=holds_kappa,
        tolerances=tol,
        anomaly=anomaly,
        normal=normal,
        commuting=commuting,
        paired_cost=paired_cost,
        equality_gap=gap,
        notes=notes,
    )


def hw_type_check(c, d, x=None, tol: Tolerances = DEFAULT_TOL) -> HWReport:
    """Hoffman-Wielandt type verdict for diagonalizable `c` against arbitrary `d`.

    Without `x` the eigenvector certificate from `diagonalizability_report` is
    used. A supplied `x` is checked for diagonalizing `c`; when it does and the
    inequality still fails the report is marked as an anomaly.
    """
    c, d = _pair_shapes(c, d)
    if x is None:
        report = diagonalizability_report(c, tol)
        if not report.diagonalizable:
            raise NotDiagonalizable("first matrix is not diagonalizable and no X was supplied")
        x = report.certificate
        alphas = report.values
        source = "certificate"
    else:
        x = nk.as_square(x)
        if x.shape != c.shape:
            raise LengthMismatch("X must have the shape of C")
        alphas = nk.eig_dense(c, tol).values
        source = "supplied"
    kappa = nk.spectral_condition(x, tol)
    cnorm = nk.frobenius_norm(c)
    conj = nk.solve(x, c @ x, tol)
    diag_residual = nk.frobenius_norm(conj - np.diag(np.diag(conj))) / max(cnorm, nk.EPS)
    x_diagonalizes = diag_residual <= tol.tol_verify * kappa
    betas = nk.eig_dense(d, tol).values
    best = best_matching(alphas, betas)
    worst = worst_matching(alphas, betas)
    frob_sq = nk.frobenius_norm(c - d) ** 2
    kappa_sq = kappa * kappa
    rhs, holds_plain, holds_kappa = _verdicts(best.cost, frob_sq, kappa_sq, tol)
    notes = []
    if not x_diagonalizes:
        notes.append("X does not diagonalize C within tolerance; the bound is not guaranteed")
    return HWReport(
        alphas=alphas,
        betas=betas,
        best=best,
        worst_cost=worst.cost,
        frob_sq=frob_sq,
        kappa_sq=kappa_sq,
        rhs=rhs,
        holds_plain=holds_plain,
        holds_kappa=holds_kappa,
        tolerances=tol,
        x_source=source,
        diag_residual=diag_residual,
        x_diagonalizes=x_diagonalizes,
        anomaly=x_diagonalizes and not holds_kappa,
        notes=notes,
    )


# --- condition number estimates ---------------------------------------------


@dataclass(frozen=True)
class GramSpectrumBound:
    s: np.ndarray  # |lambda_i|^2 + |mu_i|^2
    cross: np.ndarray  # 2 Re(lambda_i conj(mu_i))
    alphas_closed: np.ndarray
    betas_closed: np.ndarray
    sigma_min: float
    sigma_max: float
    kappa: float

    def bounds_hold(self, tol: float = 1e-9) -> dict:
        return {
            "s_in_[2,3]": bool(np.all((self.s >= 2 - tol) & (self.s <= 3 + tol))),
            "alpha_ge_1": bool(np.all(self.alphas_closed >= 1 - tol)),
            "alpha_le_beta": bool(np.all(self.alphas_closed <= self.betas_closed)),
            "beta_lt_4": bool(np.all(self.betas_closed < 4)),
            "kappa_lt_2": bool(self.kappa < 2),
        }


def kappa_v_closed_form(x1_diag, x2_diag) -> GramSpectrumBound:
    """Singular values of V = [[I, I], [X1, X2]] for diagonal X1, X2 in closed form.

    V V* splits into 2 x 2 blocks [[2, conj(l+m)], [l+m, s]]; with |l + m| = 1
    (unit-modulus quadratic coefficients) the eigenvalues are
    ((2 + s) -/+ sqrt((2 - s)^2 + 4)) / 2.
    """
    lam = np.asarray(x1_diag, dtype=np.complex128).ravel()
    mu = np.asarray(x2_diag, dtype=np.complex128).ravel()
    if lam.shape != mu.shape or lam.size == 0:
        raise LengthMismatch("root sequences must have equal nonzero length")
    s = np.abs(lam) ** 2 + np.abs(mu) ** 2
    cross = 2 * (lam * mu.conj()).real
    root = np.sqrt((2 - s) ** 2 + 4)
    alphas = ((2 + s) - root) / 2
    betas = ((2 + s) + root) / 2
    sigma_min = float(np.sqrt(alphas.min()))
    sigma_max = float(np.sqrt(betas.max()))
    return GramSpectrumBound(
        s=s,
        cross=cross,
        alphas_closed=alphas,
        betas_closed=betas,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        kappa=sigma_max / sigma_min,
    )


def kappa_linear_pd(a1, tol: Tolerances = DEFAULT_TOL) -> float:
    """kappa(A_1^{1/2}) = sqrt(lambda_max / lambda_min) for Hermitian PD A_1."""
    a1 = nk.as_square(a1)
    try:
        w, _ = nk.eig_hermitian(a1, tol)
    except NotHermitian as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if w[0] <= tol.tol_rank * max(abs(w[-1]), nk.EPS):
        raise NotPositiveDefinite("smallest eigenvalue is not positive")
    return math.sqrt(w[-1] / w[0])


def linear_pd_diagonalizer(a1, a0, tol: Tolerances = DEFAULT_TOL):
    """Eigenvector matrix of C = -A_1^{-1} A_0 for PD A_1 and Hermitian A_0.

    C = A_1^{-1/2} H A_1^{1/2} with H = -A_1^{-1/2} A_0 A_1^{-1/2} Hermitian,
    so X = A_1^{-1/2} Z diagonalizes C when Z holds the eigenvectors of H.
    Returns (x, eigenvalues).
    """
    a1, a0 = nk.as_square(a1), nk.as_square(a0)
    kappa_linear_pd(a1, tol)
    w, u = nk.eig_hermitian(a1, tol)
    inv_half = (u / np.sqrt(w)) @ u.conj().T
    h = -inv_half @ a0 @ inv_half
    values, z = nk.eig_hermitian((h + h.conj().T) / 2, tol)
    return inv_half @ z, values.astype(np.complex128)


@dataclass(frozen=True)
class ExplicitEigenvectors:
    matrix: np.ndarray  # columns v1..v4
    eigenvalues: np.ndarray  # eigenvalue each column was validated against
    residuals: np.ndarray  # ||C v - z v|| / (||C||_F ||v||)
    valid: np.ndarray  # residual within tol_verify
    fallback: bool  # a = b = 1: lifted basis used instead of the closed forms


def ds_2x2_explicit_eigenvectors(a: float, b: float, tol: Tolerances = DEFAULT_TOL) -> ExplicitEigenvectors:
    """Closed-form eigenvector candidates for the companion of I z^2 + ds(a) z + ds(b).

    The columns are assembled exactly as printed and then checked against
    C v = z v; columns that fail are flagged rather than repaired.
    """
    c = companion_array(MatrixPolynomial((ds_2x2(b), ds_2x2(a), np.eye(2))))
    omega = complex(-0.5, math.sqrt(3) / 2)
    if a == 1 and b == 1:
        e1, e2 = np.array([1, 0]), np.array([0, 1])
        cols = [lift_eigenvector(e1, omega, 2), lift_eigenvector(e2, omega, 2),
                lift_eigenvector(e1, omega.conjugate(), 2), lift_eigenvector(e2, omega.conjugate(), 2)]
        fallback = True
    else:
        disc = 4 * a * a - 4 * a - 8 * b + 5
        root = cmath.sqrt(disc)
        dens = ((2 * a - 1) + root, (2 * a - 1) - root, (1 - 2 * a) + root)
        if abs(disc) <= tol.tol_rank or min(abs(x) for x in dens) <= tol.tol_rank:
            raise DegenerateParameters(f"vanishing radicand or denominator at a={a}, b={b}")
        r = 2j / (math.sqrt(3) + 1j)
        cols = [
            np.array([omega, omega, 1, 1]),
            np.array([r, r, 1, 1]),
            np.array([2 / dens[0], -2 / dens[0], -1, 1]),
            np.array([2 / dens[1], 2 / dens[2], -1, 1]),
        ]
        fallback = False
    matrix = np.column_stack(cols).astype(np.complex128)
    spectrum = nk.eigvals(c)
    cnorm = nk.frobenius_norm(c)
    chosen, residuals = [], []
    for k in range(4):
        v = matrix[:, k]
        res = [np.linalg.norm(c @ v - z * v) / (cnorm * np.linalg.norm(v)) for z in spectrum]
        j = int(np.argmin(res))
        chosen.append(spectrum[j])
        residuals.append(res[j])
    residuals = np.array(residuals)
    return ExplicitEigenvectors(
        matrix=matrix,
        eigenvalues=np.array(chosen),
        residuals=residuals,
        valid=residuals <= tol.tol_verify,
        fallback=fallback,
    )
