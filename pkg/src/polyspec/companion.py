"""Block companion matrices, solvents, block Vandermonde diagonalization."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import numkit as nk
from .errors import (
    DegenerateRoots,
    NotCommuting,
    NotMonic,
    NotUnitary,
    SingularLeading,
    ZeroVector,
)
from .matpoly import MatrixPolynomial, companion_array, is_unitary, monicize
from .numkit import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class CompanionMatrix:
    inner: np.ndarray
    n: int
    m: int


def build_companion(p_monic: MatrixPolynomial) -> CompanionMatrix:
    if not p_monic.is_monic():
        raise NotMonic("leading coefficient is not exactly I; call monicize first")
    return CompanionMatrix(companion_array(p_monic), p_monic.n, p_monic.m)


def companion_of(p: MatrixPolynomial) -> np.ndarray:
    """Companion matrix of the monic form of any polynomial."""
    return build_companion(monicize(p)).inner


def lift_eigenvector(v, lambda0, m: int) -> np.ndarray:
    """Stack [v; z v; ...; z**(m-1) v] for z = lambda0."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    if not np.any(v):
        raise ZeroVector("eigenvector must be nonzero")
    z = complex(lambda0)
    return np.concatenate([v * z**k for k in range(m)])


def solvent_residual(x, p_monic: MatrixPolynomial) -> float:
    """||X^m + U_{m-1} X^{m-1} + ... + U_0||_F (right solvent residual)."""
    x = nk.as_square(x)
    if x.shape[0] != p_monic.n:
        raise ValueError("solvent size does not match the polynomial")
    acc = np.array(p_monic.leading, dtype=np.complex128)
    for u in reversed(p_monic.coeffs[:-1]):
        acc = acc @ x + u
    return nk.frobenius_norm(acc)


@dataclass(frozen=True)
class SolventSet:
    solvents: tuple
    residuals: tuple


def solvent_set(solvents, p_monic: MatrixPolynomial) -> SolventSet:
    xs = tuple(nk.as_square(x) for x in solvents)
    return SolventSet(xs, tuple(solvent_residual(x, p_monic) for x in xs))


def block_vandermonde(solvents) -> np.ndarray:
    """Rows of blocks X_j**k for k = 0..m-1, one block column per solvent."""
    xs = [nk.as_square(x) for x in solvents]
    m, n = len(xs), xs[0].shape[0]
    v = np.zeros((m * n, m * n), dtype=np.complex128)
    for j, x in enumerate(xs):
        power = np.eye(n, dtype=np.complex128)
        for k in range(m):
            v[k * n:(k + 1) * n, j * n:(j + 1) * n] = power
            power = power @ x
    return v


def quadratic_roots(a, b) -> tuple[complex, complex]:
    """Roots of z**2 + a z + b, avoiding cancellation.

    Ordered by decreasing imaginary part, then decreasing real part.
    """
    a, b = complex(a), complex(b)
    d = cmath.sqrt(a * a - 4 * b)
    big = a + d if abs(a + d) >= abs(a - d) else a - d
    if big == 0:
        return 0j, 0j
    r1 = -big / 2
    r2 = b / r1 if r1 != 0 else 0j
    return tuple(sorted((r1, r2), key=lambda z: (-z.imag, -z.real)))


@dataclass(frozen=True)
class VandermondeDiagonalization:
    v: np.ndarray  # [[I, I], [X1, X2]]
    x1: np.ndarray
    x2: np.ndarray
    w: np.ndarray  # unitary with w U_k w* diagonal
    x: np.ndarray  # (w* (+) w*) v, diagonalizes the original companion
    companion: np.ndarray
    similarity_residual: float  # ||C x - x diag(X1, X2)||_F
    block_residual: float  # same identity for the diagonal-coefficient companion
    kappa_v: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([np.diag(self.x1), np.diag(self.x2)])


def diagonalize_commuting_unitary_quadratic(
    p: MatrixPolynomial, tol: Tolerances = DEFAULT_TOL
) -> VandermondeDiagonalization:
    """Explicit diagonalizer of the companion of I z^2 + U_1 z + U_0 with
    commuting unitary U_0, U_1.

    A common unitary eigenbasis turns P into n decoupled scalar quadratics
    z^2 + a_i z + b_i; their roots give diagonal solvents X1, X2 and the block
    Vandermonde matrix V = [[I, I], [X1, X2]] with C similar to diag(X1, X2).
    """
    if p.m != 2:
        raise ValueError("expected a quadratic matrix polynomial")
    pm = monicize(p)
    u0, u1 = pm.coeffs[0], pm.coeffs[1]
    for name, u in (("U_0", u0), ("U_1", u1)):
        if not is_unitary(u, tol):
            raise NotUnitary(f"{name} is not unitary")
    if not nk.commute(u0, u1, tol):
        raise NotCommuting("U_0 and U_1 do not commute")
    w, d1, d0 = nk.simultaneous_diag_commuting_normal(u1, u0, tol)
    n = p.n
    lam = np.empty(n, dtype=np.complex128)
    mu = np.empty(n, dtype=np.complex128)
    for i in range(n):
        lam[i], mu[i] = quadratic_roots(d1[i], d0[i])
        if abs(lam[i] - mu[i]) <= tol.tol_cluster:
            raise DegenerateRoots(f"scalar quadratic {i} has a double root")
    x1, x2 = np.diag(lam), np.diag(mu)
    v = block_vandermonde([x1, x2])
    wh = w.conj().T
    x = np.zeros_like(v)
    x[:n, :] = wh @ v[:n, :]
    x[n:, :] = wh @ v[n:, :]
    c = companion_array(pm)
    d = companion_array(MatrixPolynomial((np.diag(d0), np.diag(d1), np.eye(n))))
    lam_all = np.concatenate([lam, mu])
    return VandermondeDiagonalization(
        v=v,
        x1=x1,
        x2=x2,
        w=w,
        x=x,
        companion=c,
        similarity_residual=nk.frobenius_norm(c @ x - x * lam_all),
        block_residual=nk.frobenius_norm(d @ v - v * lam_all),
        kappa_v=nk.spectral_condition(v, tol),
    )


@dataclass(frozen=True)
class Cluster:
    value: complex
    algebraic: int
    geometric: int


@dataclass(frozen=True)
class DiagonalizabilityReport:
    diagonalizable: bool
    clusters: tuple
    values: np.ndarray  # eigenvalues as computed (unclustered)
    certificate: np.ndarray | None  # eigenvector matrix when diagonalizable
    certificate_values: np.ndarray | None  # eigenvalue paired with each column
    certificate_kappa: float | None


def diagonalizability_report(a, tol: Tolerances = DEFAULT_TOL) -> DiagonalizabilityReport:
    """Compare algebraic and geometric multiplicities of every eigenvalue cluster.

    Geometric multiplicity is the nullity of a - z I with z the cluster mean.
    A cluster of size one has geometric multiplicity one without a rank test.
    """
    a = nk.as_square(a)
    dim = a.shape[0]
    eig = nk.eig_dense(a, tol)
    groups = nk.cluster_values(eig.values, nk.cluster_radius(nk.frobenius_norm(a), tol))
    clusters, columns, col_values = [], [], []
    for g in groups:
        z = complex(np.mean(eig.values[g]))
        if len(g) == 1:
            basis = eig.vectors[:, g]
        else:
            basis = nk.null_space(a - z * np.eye(dim), tol)
        geometric = min(basis.shape[1], len(g))
        clusters.append(Cluster(z, len(g), geometric))
        columns.append(basis[:, :geometric])
        col_values.extend([z] * geometric)
    diagonalizable = all(c.algebraic == c.geometric for c in clusters)
    certificate = certificate_values = kappa = None
    if diagonalizable:
        certificate = np.hstack(columns)
        certificate_values = np.array(col_values)
        kappa = nk.spectral_condition(certificate, tol)
    return DiagonalizabilityReport(
        diagonalizable=diagonalizable,
        clusters=tuple(clusters),
        values=eig.values,
        certificate=certificate,
        certificate_values=certificate_values,
        certificate_kappa=kappa,
    )


# --- 2 x 2 doubly stochastic families ---------------------------------------


def ds_2x2(t: float) -> np.ndarray:
    """The 2 x 2 doubly stochastic matrix [[t, 1-t], [1-t, t]]."""
    return np.array([[t, 1 - t], [1 - t, t]], dtype=float)


def ds_2x2_linear_companion(a: float, b: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Companion -A_1^{-1} A_0 of ds(a) z + ds(b) in closed form (real symmetric)."""
    den = 2 * a - 1
    if abs(den) <= tol.tol_rank:
        raise SingularLeading("A_1 is singular when a = 1/2")
    p, q = (a + b - 1) / den, (a - b) / den
    return -np.array([[p, q], [q, p]], dtype=float)


def ds_2x2_quadratic_spectrum(a: float, b: float) -> np.ndarray:
    """Eigenvalues of I z^2 + ds(a) z + ds(b) from det = (z^2+z+1)(z^2+(2a-1)z+(2b-1)).

    The z^2+z+1 pair comes first by increasing imaginary part, then the
    parameter-dependent pair by increasing real then imaginary part.
    """
    fixed = sorted(quadratic_roots(1.0, 1.0), key=lambda z: z.imag)
    moving = sorted(quadratic_roots(2 * a - 1, 2 * b - 1), key=lambda z: (z.real, z.imag))
    return np.array(fixed + moving, dtype=np.complex128)
