from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpec

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds that turn exact statements into floating-point checks.

    tol_eig     eigenpair residual bound, relative to ||A||_F
    tol_cluster radius under which two eigenvalues count as one
    tol_rank    singular value cutoff relative to sigma_max
    tol_verify  slack allowed on inequality and identity checks
    """

    tol_eig: float = 1e-9
    tol_cluster: float = 1e-7
    tol_rank: float = 1e-10
    tol_verify: float = 1e-8

    def __post_init__(self):
        for name in ("tol_eig", "tol_cluster", "tol_rank", "tol_verify"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidSpec(f"{name} must be strictly positive, got {value!r}")
        if not self.tol_cluster > self.tol_eig:
            raise InvalidSpec("tol_cluster must exceed tol_eig")

    def as_dict(self) -> dict:
        return {
            "tol_eig": self.tol_eig,
            "tol_cluster": self.tol_cluster,
            "tol_rank": self.tol_rank,
            "tol_verify": self.tol_verify,
        }


DEFAULT_TOL = Tolerances()


def as_mat(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    elif m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_mat(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def frobenius_norm(a) -> float:
    m = np.asarray(a, dtype=np.complex128)
    return float(np.sqrt(np.sum(m.real**2 + m.imag**2)))


def cluster_values(values, radius: float) -> list[list[int]]:
    """Group indices whose values are chained within `radius` of each other.

    Union-find over all pairs, so the result does not depend on input order.
    Groups are returned sorted by their smallest index.
    """
    vals = np.asarray(values, dtype=np.complex128)
    k = len(vals)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(vals[i] - vals[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def cluster_radius(scale: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Eigenvalue coincidence radius for a matrix of Frobenius norm `scale`."""
    return tol.tol_cluster * max(scale, EPS)
