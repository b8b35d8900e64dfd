"""LU with partial pivoting, triangular solves, inverse."""
from __future__ import annotations

import numpy as np

from ..errors import SingularMatrix
from ._base import DEFAULT_TOL, EPS, Tolerances, as_mat, as_square


def lu_factor(a, guard: float | None = None, tol: Tolerances = DEFAULT_TOL):
    """Return (lu, piv) with P·a = L·U packed into `lu`.

    With `guard` set, pivots smaller than `guard` are replaced by it instead of
    raising; inverse iteration relies on this for exactly singular shifts.
    """
    lu = as_square(a).copy()
    n = lu.shape[0]
    piv = np.arange(n)
    scale = np.max(np.abs(lu)) if n else 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        pivot = lu[k, k]
        if guard is not None:
            if abs(pivot) < guard:
                lu[k, k] = pivot = guard if pivot == 0 else guard * pivot / abs(pivot)
        elif abs(pivot) <= tol.tol_rank * scale or pivot == 0:
            raise SingularMatrix(f"zero pivot at column {k}")
        if k + 1 < n:
            lu[k + 1:, k] /= pivot
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve(lu, piv, b) -> np.ndarray:
    b = np.asarray(b, dtype=np.complex128)
    vector = b.ndim == 1
    x = (b.reshape(-1, 1) if vector else b)[piv].copy()
    n = lu.shape[0]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x.ravel() if vector else x


def solve(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve a·x = b by partially pivoted elimination."""
    a = as_square(a)
    b = as_mat(b) if np.ndim(b) == 2 else np.asarray(b, dtype=np.complex128)
    if b.shape[0] != a.shape[0]:
        raise ValueError("right-hand side has the wrong number of rows")
    lu, piv = lu_factor(a, tol=tol)
    return lu_solve(lu, piv, b)


def inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = as_square(a)
    return solve(a, np.eye(a.shape[0], dtype=np.complex128), tol)


def guarded_lu(a):
    """LU for inverse iteration: tiny pivots nudged to eps·||a||."""
    a = as_square(a)
    scale = max(float(np.max(np.abs(a))) if a.size else 0.0, 1.0)
    return lu_factor(a, guard=EPS * scale)


def det(a) -> complex:
    """Determinant from a guarded LU (never raises on singular input)."""
    a = as_square(a)
    lu, piv = guarded_lu(a)
    sign = _permutation_sign(piv)
    return complex(sign * np.prod(np.diag(lu)))


def _permutation_sign(piv) -> int:
    seen = np.zeros(len(piv), dtype=bool)
    sign = 1
    for i in range(len(piv)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = piv[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
