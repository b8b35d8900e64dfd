import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyspec import numkit as nk
from polyspec.companion import (
    block_vandermonde,
    build_companion,
    companion_of,
    diagonalizability_report,
    diagonalize_commuting_unitary_quadratic,
    ds_2x2,
    ds_2x2_linear_companion,
    ds_2x2_quadratic_spectrum,
    lift_eigenvector,
    quadratic_roots,
    solvent_residual,
    solvent_set,
)
from polyspec.errors import NotCommuting, NotMonic, NotUnitary, SingularLeading, ZeroVector
from polyspec.gen import EnsembleSpec, Kind, fixture, sample
from polyspec.matpoly import MatrixPolynomial, monicize, polyeig

from .helpers import cgauss, multiset_gap

OMEGA = complex(-0.5, math.sqrt(3) / 2)


def test_companion_layout():
    u0, u1 = np.diag([1.0, 2.0]), np.diag([3.0, 4.0])
    c = build_companion(MatrixPolynomial((u0, u1, np.eye(2)))).inner
    assert np.array_equal(c[:2, 2:], np.eye(2))
    assert np.array_equal(c[2:, :2], -u0) and np.array_equal(c[2:, 2:], -u1)
    assert np.array_equal(c[:2, :2], np.zeros((2, 2)))


def test_build_companion_requires_monic():
    p = MatrixPolynomial((np.eye(2), 2 * np.eye(2)))
    with pytest.raises(NotMonic):
        build_companion(p)
    assert np.allclose(companion_of(p), -0.5 * np.eye(2))


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
def test_lifted_eigenpairs_satisfy_companion(seed, n, m):
    rng = np.random.default_rng(seed)
    p = MatrixPolynomial(tuple(cgauss(rng, (n, n)) / math.sqrt(n) for _ in range(m)) + (np.eye(n),))
    c = companion_of(p)
    for z in polyeig(p).values[:2]:
        v = nk.right_singular(p(z))[1][:, -1]
        w = lift_eigenvector(v, z, m)
        assert np.linalg.norm(c @ w - z * w) <= 1e-8 * np.linalg.norm(w) * max(1, nk.frobenius_norm(c))


def test_lift_rejects_zero_vector():
    with pytest.raises(ZeroVector):
        lift_eigenvector(np.zeros(2), 1.0, 2)
    assert np.allclose(lift_eigenvector([1, 2], 2, 3), [1, 2, 2, 4, 4, 8])


def test_solvents_and_vandermonde():
    p = MatrixPolynomial((np.eye(2), np.eye(2), np.eye(2)))
    x1, x2 = OMEGA * np.eye(2), OMEGA.conjugate() * np.eye(2)
    sset = solvent_set([x1, x2], p)
    assert max(sset.residuals) < 1e-15
    assert solvent_residual(np.eye(2), p) == pytest.approx(3 * math.sqrt(2))
    v = block_vandermonde([x1, x2])
    c = companion_of(p)
    assert np.allclose(np.linalg.solve(v, c @ v), np.diag([OMEGA, OMEGA, OMEGA.conjugate(), OMEGA.conjugate()]))


@pytest.mark.parametrize("a, b", [(1, 1), (-2, 1), (3, -4), (1j, 2 - 1j), (1e8, 1)])
def test_quadratic_roots(a, b):
    r1, r2 = quadratic_roots(a, b)
    for r in (r1, r2):
        assert abs(r * r + a * r + b) <= 1e-12 * max(1, abs(a) ** 2, abs(b))
    assert (-r1.imag, -r1.real) <= (-r2.imag, -r2.real)


def test_quadratic_roots_no_cancellation():
    small = min(quadratic_roots(1e8, 1), key=abs)
    assert small == pytest.approx(-1e-8, rel=1e-12)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("monic", [True, False])
def test_commuting_unitary_diagonalization(seed, monic):
    count = 2 if monic else 3
    mats = sample(EnsembleSpec(Kind.COMMUTING_UNITARY_PAIR, 4, seed, {"count": count}))
    p = MatrixPolynomial(mats + ((np.eye(4),) if monic else ()))
    d = diagonalize_commuting_unitary_quadratic(p)
    c = companion_of(p)
    assert d.similarity_residual <= 1e-8 * nk.frobenius_norm(c)
    assert d.block_residual <= 1e-8 * nk.frobenius_norm(c)
    lam, mu = np.diag(d.x1), np.diag(d.x2)
    assert np.all(np.abs(lam - mu) ** 2 >= 3 - 1e-9)
    assert 1 <= d.kappa_v < 2
    assert multiset_gap(d.eigenvalues, polyeig(p).values) <= 1e-8
    pm = monicize(p)
    assert solvent_residual(np.diag(lam), MatrixPolynomial(
        tuple(d.w @ u @ d.w.conj().T for u in pm.coeffs[:-1]) + (np.eye(4),))) <= 1e-9


def test_f13_construction_gives_sqrt3():
    d = diagonalize_commuting_unitary_quadratic(fixture("F13").polynomials[0])
    assert d.kappa_v == pytest.approx(math.sqrt(3), abs=1e-12)


def test_diagonalize_rejects_bad_hypotheses():
    with pytest.raises(NotCommuting):
        diagonalize_commuting_unitary_quadratic(fixture("F3").polynomials[0])
    with pytest.raises(NotUnitary):
        diagonalize_commuting_unitary_quadratic(MatrixPolynomial((2 * np.eye(2), np.eye(2), np.eye(2))))
    with pytest.raises(ValueError):
        diagonalize_commuting_unitary_quadratic(MatrixPolynomial((np.eye(2), np.eye(2))))


def test_f3_report():
    rep = diagonalizability_report(companion_of(fixture("F3").polynomials[0]))
    assert not rep.diagonalizable and rep.certificate is None
    got = sorted((round(c.value.real), c.algebraic, c.geometric) for c in rep.clusters)
    assert got == [(-1, 2, 1), (1, 2, 1)]
    c = companion_of(fixture("F3").polynomials[0])
    assert nk.rank_tol(c - np.eye(4)) == 3


@pytest.mark.parametrize("fid", ["F3", "F4", "F5", "F6", "F9", "F10", "F11", "F12"])
def test_published_non_diagonalizable(fid):
    for p in fixture(fid).polynomials:
        assert not diagonalizability_report(companion_of(p)).diagonalizable


def test_certificate_diagonalizes():
    rep = diagonalizability_report(companion_of(fixture("F13").polynomials[0]))
    assert rep.diagonalizable
    x, c = rep.certificate, companion_of(fixture("F13").polynomials[0])
    assert np.allclose(c @ x, x * rep.certificate_values, atol=1e-12)
    assert rep.certificate_kappa == pytest.approx(math.sqrt(3), abs=1e-9)


def test_random_matrix_is_diagonalizable():
    a = cgauss(np.random.default_rng(8), (6, 6))
    rep = diagonalizability_report(a)
    assert rep.diagonalizable and all(c.algebraic == 1 for c in rep.clusters)


@given(st.floats(0, 1), st.floats(0, 1))
def test_ds_linear_closed_form(a, b):
    if abs(2 * a - 1) < 1e-3:
        with pytest.raises(SingularLeading):
            ds_2x2_linear_companion(0.5, b)
        return
    closed = ds_2x2_linear_companion(a, b)
    numeric = companion_of(MatrixPolynomial((ds_2x2(b), ds_2x2(a))))
    assert np.allclose(closed, numeric, atol=1e-9 * max(1, np.abs(closed).max()))
    assert np.array_equal(closed, closed.T)


def test_ds_quadratic_spectrum_order_and_values():
    a, b = 0.25, 1.0
    spec = ds_2x2_quadratic_spectrum(a, b)
    assert spec[0] == pytest.approx(OMEGA.conjugate()) and spec[1] == pytest.approx(OMEGA)
    p = MatrixPolynomial((ds_2x2(b), ds_2x2(a), np.eye(2)))
    assert multiset_gap(spec, polyeig(p).values) <= 1e-10
    moving = spec[2:]
    assert (moving[0].real, moving[0].imag) <= (moving[1].real, moving[1].imag)


def test_ds_monic_example_from_small_entries():
    # I z^2 + ds(1/4) z + ds(1/3): the z^2 - z/2 - 1/3 factor gives (3 - sqrt 57)/12
    spec = ds_2x2_quadratic_spectrum(0.25, 1 / 3)
    assert np.min(np.abs(spec - (3 - math.sqrt(57)) / 12)) <= 1e-12


def test_ds_linear_companion_examples():
    assert np.allclose(ds_2x2_linear_companion(1, 1), -np.eye(2))
    assert np.allclose(ds_2x2_linear_companion(1, 0), -np.array([[0, 1], [1, 0]]))
    numeric = -np.linalg.solve(ds_2x2(0.75), ds_2x2(1 / 3))
    assert np.allclose(ds_2x2_linear_companion(0.75, 1 / 3), numeric, atol=1e-12)


def test_ds_quadratic_golden_pair():
    spec = ds_2x2_quadratic_spectrum(0, 0)
    phi = (1 + math.sqrt(5)) / 2
    assert multiset_gap(spec[2:], [phi, 1 - phi]) <= 1e-12
    doubled = ds_2x2_quadratic_spectrum(1, 1)
    assert multiset_gap(doubled, [OMEGA, OMEGA, OMEGA.conjugate(), OMEGA.conjugate()]) <= 1e-12
