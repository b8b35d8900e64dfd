"""Jacobi methods: two-sided for Hermitian eigenproblems, one-sided (Hestenes) for SVD."""
from __future__ import annotations

import math

import numpy as np

from ..errors import NoConvergence, NotHermitian, SingularMatrix
from ._base import DEFAULT_TOL, EPS, Tolerances, as_mat, as_square, frobenius_norm

_MAX_SWEEPS = 60


def _rotation(tau: float) -> tuple[float, float]:
    # smaller root of t^2 + 2 tau t - 1 = 0
    if tau == 0.0:
        t = 1.0
    elif abs(tau) > 1e150:
        t = 0.5 / tau  # tau*tau would overflow
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, c * t


def eig_hermitian(a, tol: Tolerances = DEFAULT_TOL):
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Returns (values, vectors): real eigenvalues in ascending order and a unitary
    matrix whose columns are the matching eigenvectors.
    """
    a = as_square(a)
    norm = frobenius_norm(a)
    if frobenius_norm(a - a.conj().T) > tol.tol_eig * norm + EPS:
        raise NotHermitian("matrix is not Hermitian within tol_eig")
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = EPS * max(norm, EPS)
    for _ in range(_MAX_SWEEPS):
        off = frobenius_norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= target * 1e-3:
                    continue
                e = apq / mag
                c, s = _rotation((a[q, q].real - a[p, p].real) / (2.0 * mag))
                j = np.array([[c, s * e], [-s * e.conjugate(), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ j
                a[p, q] = a[q, p] = 0.0
    else:
        raise NoConvergence("Jacobi sweeps exhausted")
    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def _hestenes(a):
    """One-sided Jacobi on the columns of `a` (rows >= cols).

    Returns (sigma, v) unsorted: a·v has mutually orthogonal columns of norm sigma.
    """
    u = a.copy()
    n = u.shape[1]
    v = np.eye(n, dtype=np.complex128)
    # columns below this squared norm are rounding noise of a dependent column
    negligible = (EPS * frobenius_norm(a)) ** 2
    for _ in range(_MAX_SWEEPS):
        rotated = False
        norms = np.einsum("ij,ij->j", u.conj(), u).real
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha, beta = norms[i], norms[j]
                if min(alpha, beta) <= negligible:
                    continue
                gamma = np.vdot(u[:, i], u[:, j])
                mag = abs(gamma)
                if mag == 0.0 or mag <= EPS * math.sqrt(alpha * beta):
                    continue
                rotated = True
                e = (gamma / mag).conjugate()
                c, s = _rotation((beta - alpha) / (2.0 * mag))
                ui, uj = u[:, i].copy(), u[:, j] * e
                u[:, i] = c * ui - s * uj
                u[:, j] = s * ui + c * uj
                vi, vj = v[:, i].copy(), v[:, j] * e
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
                norms[i] = np.vdot(u[:, i], u[:, i]).real
                norms[j] = np.vdot(u[:, j], u[:, j]).real
        if not rotated:
            break
    else:
        raise NoConvergence("one-sided Jacobi sweeps exhausted")
    return np.sqrt(np.einsum("ij,ij->j", u.conj(), u).real), v


def svd_values(a) -> np.ndarray:
    """Singular values in nonincreasing order (min(rows, cols) of them)."""
    a = as_mat(a)
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    if a.size == 0:
        return np.zeros(0)
    sigma, _ = _hestenes(a)
    return np.sort(sigma)[::-1]


def right_singular(a):
    """(sigma, v) sorted descending, columns of v the right singular vectors."""
    a = as_mat(a)
    if a.shape[0] < a.shape[1]:
        a = np.vstack([a, np.zeros((a.shape[1] - a.shape[0], a.shape[1]), complex)])
    sigma, v = _hestenes(a)
    order = np.argsort(-sigma, kind="stable")
    return sigma[order], v[:, order]


def rank_tol(a, tol: Tolerances = DEFAULT_TOL) -> int:
    s = svd_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.tol_rank * s[0]))


def null_space(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of `a`."""
    sigma, v = right_singular(a)
    if sigma.size == 0 or sigma[0] == 0.0:
        return v
    keep = sigma <= tol.tol_rank * sigma[0]
    return v[:, keep]


def spectral_condition(a, tol: Tolerances = DEFAULT_TOL) -> float:
    a = as_square(a)
    s = svd_values(a)
    if s.size == 0 or s[-1] <= tol.tol_rank * s[0]:
        raise SingularMatrix("matrix is numerically singular")
    return float(s[0] / s[-1])
