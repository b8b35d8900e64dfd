"""Dense complex eigensolver: Householder Hessenberg reduction, shifted QR, inverse iteration."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NoConvergence
from ._base import (
    DEFAULT_TOL,
    EPS,
    Tolerances,
    as_square,
    cluster_radius,
    cluster_values,
    frobenius_norm,
)
from ._dense import guarded_lu, lu_solve


@dataclass(frozen=True)
class EigenDecomp:
    values: np.ndarray  # complex, length n
    vectors: np.ndarray  # n x n, column i pairs with values[i]
    residuals: np.ndarray  # ||A v_i - lambda_i v_i|| / ||A||_F


def hessenberg(a):
    """Return (h, q) with a = q·h·q* and h upper Hessenberg."""
    h = as_square(a).copy()
    n = h.shape[0]
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        norm = math.hypot(abs(x[0]), tail)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        x[0] += phase * norm
        x /= np.linalg.norm(x)
        h[k + 1:, :] -= 2.0 * np.outer(x, x.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ x, x.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ x, x.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _givens(a: complex, b: complex):
    # G = [[c, s], [-conj(s), c]] maps (a, b) to (r, 0)
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, b.conjugate() / abs(b)
    rho = math.hypot(abs(a), abs(b))
    return abs(a) / rho, (a / abs(a)) * b.conjugate() / rho


def _wilkinson(t, hi):
    a, b = t[hi - 1, hi - 1], t[hi - 1, hi]
    c, d = t[hi, hi - 1], t[hi, hi]
    half = (a - d) / 2
    disc = np.sqrt(half * half + b * c)
    mid = (a + d) / 2
    r1, r2 = mid + disc, mid - disc
    return r1 if abs(r1 - d) <= abs(r2 - d) else r2


def schur(a, max_sweeps: int | None = None):
    """Complex Schur form: returns (t, q) with a = q·t·q*, t upper triangular.

    Wilkinson shifts with exceptional shifts after 10 stalled sweeps; the total
    sweep count is capped at 100·n² by default.
    """
    t, q = hessenberg(a)
    n = t.shape[0]
    cap = max_sweeps if max_sweeps is not None else 100 * n * n
    sweeps = 0
    hi = n - 1
    stall = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            scale = abs(t[lo, lo]) + abs(t[lo - 1, lo - 1])
            if scale == 0.0:
                scale = frobenius_norm(t)
            if abs(t[lo, lo - 1]) <= EPS * scale:
                t[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            stall = 0
            continue
        sweeps += 1
        stall += 1
        if sweeps > cap:
            raise NoConvergence(f"QR iteration did not converge in {cap} sweeps")
        if stall % 10 == 0:
            shift = t[hi, hi] + 0.75 * abs(t[hi, hi - 1]) * (1 + 0.5j)
        else:
            shift = _wilkinson(t, hi)
        _qr_sweep(t, q, lo, hi, shift)
    return t, q


def _qr_sweep(t, q, lo, hi, shift):
    n = t.shape[0]
    idx = np.arange(lo, hi + 1)
    t[idx, idx] -= shift
    rots = []
    for j in range(lo, hi):
        c, s = _givens(t[j, j], t[j + 1, j])
        g = np.array([[c, s], [-np.conj(s), c]])
        t[j:j + 2, j:] = g @ t[j:j + 2, j:]
        t[j + 1, j] = 0.0
        rots.append(g.conj().T)
    for j, gh in zip(range(lo, hi), rots):
        top = min(j + 2, n)
        t[:top, j:j + 2] = t[:top, j:j + 2] @ gh
        q[:, j:j + 2] = q[:, j:j + 2] @ gh
    t[idx, idx] += shift


def _start_vector(n):
    rng = np.random.default_rng(20240229)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


def _residual(a, lam, v, anorm):
    r = np.linalg.norm(a @ v - lam * v)
    return r / anorm if anorm > 0 else r


def _inverse_iteration(a, lam, start, against, anorm, steps=4):
    """Best (vector, residual) seen over a few inverse iteration steps.

    Iterates can oscillate near a defective eigenvalue, where one step often
    beats several, so the smallest residual wins rather than the last iterate.
    """
    n = a.shape[0]
    lu, piv = guarded_lu(a - lam * np.eye(n))
    x = start.copy()
    best, best_res = None, np.inf
    for _ in range(steps):
        y = lu_solve(lu, piv, x)
        for u in against:
            y -= np.vdot(u, y) * u
        norm = np.linalg.norm(y)
        if norm == 0.0 or not np.isfinite(norm):
            break
        x = y / norm
        res = _residual(a, lam, x, anorm)
        if res < best_res:
            best, best_res = x, res
        if res <= 16 * EPS:
            break
    return best, best_res


def eig_dense(a, tol: Tolerances = DEFAULT_TOL) -> EigenDecomp:
    """Eigenvalues via shifted QR and unit eigenvectors via inverse iteration on `a`.

    Within a cluster of (numerically) equal eigenvalues later vectors are kept
    orthogonal to earlier ones whenever that still yields an eigenvector, so a
    non-defective repeated eigenvalue gets an independent set.
    """
    a = as_square(a)
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    t, _ = schur(a)
    values = np.diag(t).copy()
    anorm = frobenius_norm(a)
    start = _start_vector(n)
    vectors = np.zeros((n, n), dtype=np.complex128)
    residuals = np.zeros(n)
    for group in cluster_values(values, cluster_radius(anorm, tol)):
        found = []
        for i in group:
            lam = values[i]
            v, res = None, np.inf
            if found:
                v, res = _inverse_iteration(a, lam, start, found, anorm)
            if v is None or res > tol.tol_eig:
                v, res = _inverse_iteration(a, lam, start, [], anorm)
            if v is None:
                raise NoConvergence(f"inverse iteration failed for eigenvalue {lam}")
            if res > tol.tol_eig:
                raise NoConvergence(f"eigenpair residual {res:.3g} exceeds tol_eig")
            found.append(v)
            vectors[:, i] = v
            residuals[i] = res
    return EigenDecomp(values=values, vectors=vectors, residuals=residuals)


def eigvals(a) -> np.ndarray:
    t, _ = schur(a)
    return np.diag(t).copy()
