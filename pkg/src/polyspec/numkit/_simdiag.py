from __future__ import annotations

import numpy as np

from ..errors import NotCommuting, NotNormal
from ._base import DEFAULT_TOL, Tolerances, as_square, cluster_radius, cluster_values, frobenius_norm
from ._qr import schur


def is_normal(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    gap = frobenius_norm(a @ a.conj().T - a.conj().T @ a)
    return gap <= tol.tol_verify * (frobenius_norm(a) ** 2 + 1.0)


def commutator_gap(a, b) -> float:
    return frobenius_norm(a @ b - b @ a)


def commute(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    return commutator_gap(a, b) <= tol.tol_verify * (frobenius_norm(a) * frobenius_norm(b) + 1.0)


def simultaneous_diag_commuting_normal(a, b, tol: Tolerances = DEFAULT_TOL):
    """Common unitary eigenbasis for two commuting normal matrices.

    Returns (w, d_a, d_b) with w·a·w* ≈ diag(d_a) and w·b·w* ≈ diag(d_b).
    The Schur vectors of `a` are refined inside each eigenvalue cluster of `a`
    by a Schur decomposition of `b` compressed onto that cluster.
    """
    a, b = as_square(a), as_square(b)
    if a.shape != b.shape:
        raise ValueError("matrices must have the same shape")
    if not is_normal(a, tol):
        raise NotNormal("first matrix is not normal")
    if not is_normal(b, tol):
        raise NotNormal("second matrix is not normal")
    if not commute(a, b, tol):
        raise NotCommuting(f"commutator norm {commutator_gap(a, b):.3g} exceeds tolerance")
    t, q = schur(a)
    q = q.copy()
    for group in cluster_values(np.diag(t), cluster_radius(frobenius_norm(a), tol)):
        if len(group) == 1:
            continue
        qc = q[:, group]
        _, z = schur(qc.conj().T @ b @ qc)
        q[:, group] = qc @ z
    w = q.conj().T
    d_a = np.diag(w @ a @ q).copy()
    d_b = np.diag(w @ b @ q).copy()
    return w, d_a, d_b
