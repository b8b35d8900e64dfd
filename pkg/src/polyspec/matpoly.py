"""Matrix polynomials P(z) = A_0 + A_1 z + ... + A_m z^m and their eigenvalues."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from . import numkit as nk
from .errors import SingularMatrix
from .numkit import DEFAULT_TOL, Tolerances

# Doubly stochastic predicate thresholds: generator outputs are convex
# combinations, so only rounding-level violations are expected.
DS_NONNEG_TOL = 1e-12
DS_SUM_TOL = 1e-9

ANNULUS_INNER = 0.5
ANNULUS_OUTER = 2.0


def _leading_is_nonsingular(a, tol: Tolerances) -> bool:
    s = nk.svd_values(a)
    return s[0] > 0 and s[-1] > tol.tol_rank * s[0]


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """n x n matrix polynomial of degree m; coeffs[i] multiplies z**i."""

    coeffs: tuple
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        mats = tuple(nk.as_square(c) for c in self.coeffs)
        if len(mats) < 2:
            raise ValueError("a matrix polynomial needs degree >= 1 (at least two coefficients)")
        n = mats[0].shape[0]
        if any(c.shape != (n, n) for c in mats):
            raise ValueError("all coefficients must share one square shape")
        for c in mats:
            c.setflags(write=False)
        object.__setattr__(self, "coeffs", mats)
        if not _leading_is_nonsingular(mats[-1], self.tol):
            raise SingularMatrix("leading coefficient is numerically singular")

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> np.ndarray:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(np.array_equal(self.leading, np.eye(self.n)))

    def scale(self) -> float:
        return max(nk.frobenius_norm(c) for c in self.coeffs)

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs)
        )

    __hash__ = None


def evaluate(p: MatrixPolynomial, z) -> np.ndarray:
    """Horner evaluation of sum A_i z**i."""
    z = complex(z)
    out = np.array(p.coeffs[-1], dtype=np.complex128)
    for c in reversed(p.coeffs[:-1]):
        out = out * z + c
    return out


def monicize(p: MatrixPolynomial) -> MatrixPolynomial:
    """Left-multiply by A_m^{-1}; the leading coefficient becomes exactly I."""
    if p.is_monic():
        return p
    lead = p.leading
    us = [nk.solve(lead, c, p.tol) for c in p.coeffs[:-1]]
    return MatrixPolynomial((*us, np.eye(p.n, dtype=np.complex128)), p.tol)


class Reversed(NamedTuple):
    coeffs: tuple
    leading_nonsingular: bool

    def polynomial(self) -> MatrixPolynomial:
        return MatrixPolynomial(self.coeffs)


def reverse(p: MatrixPolynomial) -> Reversed:
    """Coefficients of z**m P(1/z).

    The reversed leading coefficient is A_0, which may be singular (infinite
    eigenvalue of P), so a flagged raw sequence is returned.
    """
    coeffs = tuple(reversed(p.coeffs))
    return Reversed(coeffs, _leading_is_nonsingular(coeffs[-1], p.tol))


def evaluate_coeffs(coeffs: Sequence, z) -> np.ndarray:
    z = complex(z)
    out = np.array(coeffs[-1], dtype=np.complex128)
    for c in reversed(coeffs[:-1]):
        out = out * z + c
    return out


# --- coefficient classes ---------------------------------------------------


class Tag(str, Enum):
    PERMUTATION = "Permutation"
    DOUBLY_STOCHASTIC = "DoublyStochastic"
    UNITARY = "Unitary"
    DIAGONAL = "Diagonal"
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    NORMAL = "Normal"
    UPPER_TRIANGULAR = "UpperTriangular"
    GENERAL = "General"


def is_unitary(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return nk.frobenius_norm(a.conj().T @ a - np.eye(a.shape[0])) <= tol.tol_verify


def is_doubly_stochastic(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=np.complex128)
    if np.max(np.abs(a.imag), initial=0.0) > DS_NONNEG_TOL:
        return False
    r = a.real
    return bool(
        np.all(r >= -DS_NONNEG_TOL)
        and np.all(np.abs(r.sum(axis=0) - 1) <= DS_SUM_TOL)
        and np.all(np.abs(r.sum(axis=1) - 1) <= DS_SUM_TOL)
    )


def is_permutation(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    if not is_doubly_stochastic(a, tol):
        return False
    r = np.asarray(a).real
    return bool(np.all(np.minimum(np.abs(r), np.abs(r - 1)) <= DS_SUM_TOL))


def tol_scale(a) -> float:
    return max(nk.frobenius_norm(a), 1.0)


def is_diagonal(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return nk.frobenius_norm(a - np.diag(np.diag(a))) <= tol.tol_verify * tol_scale(a)


def is_upper_triangular(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return nk.frobenius_norm(np.tril(a, -1)) <= tol.tol_verify * tol_scale(a)


def is_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return nk.frobenius_norm(a - a.conj().T) <= tol.tol_verify * tol_scale(a)


def _hermitian_spectrum(a, tol):
    values, _ = nk.eig_hermitian((a + a.conj().T) / 2, tol)
    return values


def is_positive_semidefinite(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=np.complex128)
    if not is_hermitian(a, tol):
        return False
    return bool(_hermitian_spectrum(a, tol)[0] >= -tol.tol_verify * tol_scale(a))


def is_positive_definite(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=np.complex128)
    if not is_hermitian(a, tol):
        return False
    w = _hermitian_spectrum(a, tol)
    return bool(w[-1] > 0 and w[0] > tol.tol_rank * w[-1])


_PREDICATES = (
    (Tag.PERMUTATION, is_permutation),
    (Tag.DOUBLY_STOCHASTIC, is_doubly_stochastic),
    (Tag.UNITARY, is_unitary),
    (Tag.DIAGONAL, is_diagonal),
    (Tag.POSITIVE_DEFINITE, is_positive_definite),
    (Tag.POSITIVE_SEMIDEFINITE, is_positive_semidefinite),
    (Tag.NORMAL, lambda a, tol: nk.is_normal(a, tol)),
    (Tag.UPPER_TRIANGULAR, is_upper_triangular),
)


@dataclass(frozen=True)
class CoefficientClass:
    tag: Tag  # most specific class, by the priority order of _PREDICATES
    traits: frozenset  # every Tag whose predicate holds

    def has(self, tag: Tag) -> bool:
        return tag in self.traits


@dataclass(frozen=True)
class Classification:
    coefficients: tuple  # CoefficientClass per A_0..A_m
    commuting_family: bool

    def all_have(self, tag: Tag, indices=None) -> bool:
        chosen = self.coefficients if indices is None else [self.coefficients[i] for i in indices]
        return all(c.has(tag) for c in chosen)


def classify_matrix(a, tol: Tolerances = DEFAULT_TOL) -> CoefficientClass:
    traits = frozenset(tag for tag, pred in _PREDICATES if pred(a, tol))
    for tag, _ in _PREDICATES:
        if tag in traits:
            return CoefficientClass(tag, traits)
    return CoefficientClass(Tag.GENERAL, traits | {Tag.GENERAL})


def classify(p: MatrixPolynomial, tol: Tolerances = DEFAULT_TOL) -> Classification:
    classes = tuple(classify_matrix(c, tol) for c in p.coeffs)
    commuting = all(nk.commute(a, b, tol) for a, b in combinations(p.coeffs, 2))
    return Classification(classes, commuting)


def annulus_hypothesis(cls: Classification) -> str | None:
    """Name of the coefficient hypothesis that guarantees 1/2 < |z| < 2, if any."""
    if cls.all_have(Tag.UNITARY):
        return "unitary"
    ends = (0, len(cls.coefficients) - 1)
    middle = range(1, len(cls.coefficients) - 1)
    if cls.all_have(Tag.PERMUTATION, ends) and cls.all_have(Tag.DOUBLY_STOCHASTIC, middle):
        return "ds-permutation-ends"
    return None


# --- eigenvalues -----------------------------------------------------------


def companion_array(p_monic: MatrixPolynomial) -> np.ndarray:
    """mn x mn block companion of a monic polynomial: shifted identities above,
    -U_0 .. -U_{m-1} in the last block row."""
    n, m = p_monic.n, p_monic.m
    c = np.zeros((m * n, m * n), dtype=np.complex128)
    for i in range(m - 1):
        c[i * n:(i + 1) * n, (i + 1) * n:(i + 2) * n] = np.eye(n)
    for i, u in enumerate(p_monic.coeffs[:-1]):
        c[(m - 1) * n:, i * n:(i + 1) * n] = -u
    return c


@dataclass(frozen=True)
class PolyEigenResult:
    values: np.ndarray
    min_modulus: float
    max_modulus: float
    annulus_ok: bool
    marginal: bool  # some modulus within tol_verify of 1/2 or 2
    hypothesis: str | None  # set when a theorem guarantees the annulus

    @property
    def annulus_guaranteed(self) -> bool:
        return self.hypothesis is not None


def annulus_verdict(values, tol: Tolerances = DEFAULT_TOL):
    mods = np.abs(np.asarray(values))
    lo, hi = float(mods.min()), float(mods.max())
    ok = ANNULUS_INNER + tol.tol_verify < lo and hi < ANNULUS_OUTER - tol.tol_verify
    marginal = bool(
        np.any(np.abs(mods - ANNULUS_INNER) <= tol.tol_verify)
        or np.any(np.abs(mods - ANNULUS_OUTER) <= tol.tol_verify)
    )
    return lo, hi, ok, marginal


def polyeig(p: MatrixPolynomial, tol: Tolerances = DEFAULT_TOL) -> PolyEigenResult:
    """All m·n eigenvalues of P, via the companion matrix of its monic form."""
    values = nk.eigvals(companion_array(monicize(p)))
    lo, hi, ok, marginal = annulus_verdict(values, tol)
    return PolyEigenResult(
        values=values,
        min_modulus=lo,
        max_modulus=hi,
        annulus_ok=ok,
        marginal=marginal,
        hypothesis=annulus_hypothesis(classify(p, tol)),
    )


def det_at(p: MatrixPolynomial, z) -> complex:
    return nk.det(evaluate(p, z))
