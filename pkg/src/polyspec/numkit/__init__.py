"""Dense complex linear algebra used by the rest of the package.

Matrices are plain 2-D ``numpy.complex128`` arrays; every entry point coerces
its input with :func:`as_mat` so lists and real arrays are accepted too.
"""
from ._base import (
    DEFAULT_TOL,
    EPS,
    Tolerances,
    as_mat,
    as_square,
    cluster_radius,
    cluster_values,
    frobenius_norm,
)
from ._dense import det, inverse, lu_factor, lu_solve, solve
from ._jacobi import (
    eig_hermitian,
    null_space,
    rank_tol,
    right_singular,
    spectral_condition,
    svd_values,
)
from ._qr import EigenDecomp, eig_dense, eigvals, hessenberg, schur
from ._simdiag import commutator_gap, commute, is_normal, simultaneous_diag_commuting_normal

__all__ = [
    "DEFAULT_TOL",
    "EPS",
    "EigenDecomp",
    "Tolerances",
    "as_mat",
    "as_square",
    "cluster_radius",
    "cluster_values",
    "commutator_gap",
    "commute",
    "det",
    "eig_dense",
    "eig_hermitian",
    "eigvals",
    "frobenius_norm",
    "hessenberg",
    "inverse",
    "is_normal",
    "lu_factor",
    "lu_solve",
    "null_space",
    "rank_tol",
    "right_singular",
    "schur",
    "simultaneous_diag_commuting_normal",
    "solve",
    "spectral_condition",
    "svd_values",
]
