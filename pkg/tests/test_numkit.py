import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyspec import numkit as nk
from polyspec.errors import InvalidSpec, NoConvergence, NotHermitian, NotNormal, SingularMatrix

from .helpers import cgauss, multiset_gap

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 12)


def test_tolerance_defaults_and_validation():
    assert nk.DEFAULT_TOL.as_dict() == {"tol_eig": 1e-9, "tol_cluster": 1e-7, "tol_rank": 1e-10, "tol_verify": 1e-8}
    with pytest.raises(InvalidSpec):
        nk.Tolerances(tol_verify=0.0)
    with pytest.raises(InvalidSpec):
        nk.Tolerances(tol_eig=1e-6, tol_cluster=1e-7)


def test_as_mat_rejects_nonfinite():
    with pytest.raises(ValueError):
        nk.as_mat([[1.0, float("nan")]])
    with pytest.raises(ValueError):
        nk.as_square(np.ones((2, 3)))
    assert nk.as_mat(3.0).shape == (1, 1)


def test_frobenius_of_known_matrix():
    assert nk.frobenius_norm([[3, 4j]]) == pytest.approx(5.0)


@pytest.mark.parametrize(
    "values, radius, groups",
    [
        ([0, 1, 2], 0.5, [[0], [1], [2]]),
        ([0, 1e-9, 1], 1e-8, [[0, 1], [2]]),
        ([2, 0, 1e-9, 2 + 1e-9], 1e-8, [[0, 3], [1, 2]]),
    ],
)
def test_cluster_values(values, radius, groups):
    assert nk.cluster_values(values, radius) == groups


@given(seeds, sizes)
def test_cluster_values_order_independent(seed, n):
    rng = np.random.default_rng(seed)
    vals = np.round(rng.standard_normal(n), 1)
    perm = rng.permutation(n)
    a = {frozenset(g) for g in nk.cluster_values(vals, 0.05)}
    b = {frozenset(int(perm[i]) for i in g) for g in nk.cluster_values(vals[perm], 0.05)}
    assert a == b


@given(seeds, sizes)
def test_lu_solve_and_det_match_numpy(seed, n):
    rng = np.random.default_rng(seed)
    a, b = cgauss(rng, (n, n)), cgauss(rng, (n, 2))
    x = nk.solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-9 * np.linalg.norm(a) * np.linalg.norm(x) + 1e-12
    assert abs(nk.det(a) - np.linalg.det(a)) <= 1e-9 * max(1.0, abs(np.linalg.det(a)))


def test_singular_solve_and_det():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrix):
        nk.solve(a, np.eye(2))
    with pytest.raises(SingularMatrix):
        nk.inverse(np.zeros((3, 3)))
    assert abs(nk.det(a)) < 1e-12
    assert nk.det(np.array([[0, 1], [1, 0]])) == pytest.approx(-1)


@given(seeds, sizes)
def test_hessenberg_similarity(seed, n):
    a = cgauss(np.random.default_rng(seed), (n, n))
    h, q = nk.hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0)
    assert np.allclose(q @ q.conj().T, np.eye(n), atol=1e-12)
    assert np.linalg.norm(q @ h @ q.conj().T - a) <= 1e-12 * np.linalg.norm(a) * n


@given(seeds, sizes)
def test_schur_form(seed, n):
    a = cgauss(np.random.default_rng(seed), (n, n))
    t, q = nk.schur(a)
    assert np.allclose(np.tril(t, -1), 0)
    assert np.linalg.norm(q @ t @ q.conj().T - a) <= 1e-12 * np.linalg.norm(a) * n


def test_schur_sweep_cap():
    a = cgauss(np.random.default_rng(0), (6, 6))
    with pytest.raises(NoConvergence):
        nk.schur(a, max_sweeps=1)


@given(seeds, st.integers(1, 16))
def test_eig_dense_residual_contract(seed, n):
    a = cgauss(np.random.default_rng(seed), (n, n))
    e = nk.eig_dense(a)
    for k in range(n):
        v = e.vectors[:, k]
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert np.linalg.norm(a @ v - e.values[k] * v) <= 1e-9 * np.linalg.norm(a)
    assert np.all(e.residuals <= nk.DEFAULT_TOL.tol_eig)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_triangular_spectrum_oracle(n):
    t = np.triu(cgauss(np.random.default_rng(n), (n, n)))
    assert multiset_gap(nk.eigvals(t), np.diag(t)) <= 1e-9


def test_characteristic_polynomial_roots():
    # companion of z^3 - 6z^2 + 11z - 6 = (z-1)(z-2)(z-3)
    c = np.array([[0, 1, 0], [0, 0, 1], [6, -11, 6]], dtype=float)
    assert multiset_gap(nk.eigvals(c), [1, 2, 3]) <= 1e-9


def test_defective_matrix_still_meets_contract():
    jordan = np.array([[2.0, 1.0], [0.0, 2.0]])
    e = nk.eig_dense(jordan)
    assert np.allclose(e.values, 2)
    assert np.all(e.residuals <= 1e-9)


@given(seeds, sizes)
def test_eig_hermitian(seed, n):
    g = cgauss(np.random.default_rng(seed), (n, n))
    h = g + g.conj().T
    w, v = nk.eig_hermitian(h)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-9)
    assert np.linalg.norm(h @ v - v * w) <= 1e-9 * np.linalg.norm(h)
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-9 * np.linalg.norm(h))


def test_eig_hermitian_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        nk.eig_hermitian(np.array([[0, 1], [0, 0]]))


@given(seeds, st.integers(1, 8), st.integers(1, 8))
def test_svd_values_match_gram_spectrum(seed, r, c):
    a = cgauss(np.random.default_rng(seed), (r, c))
    s = nk.svd_values(a)
    assert len(s) == min(r, c)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    gram, _ = nk.eig_hermitian(a.conj().T @ a)
    top = np.sort(gram)[::-1][: len(s)]
    assert np.allclose(s**2, top, atol=1e-8 * np.linalg.norm(a) ** 2)


def test_rank_and_null_space():
    a = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=complex)
    assert nk.rank_tol(a) == 2
    ns = nk.null_space(a)
    assert ns.shape == (3, 1)
    assert np.linalg.norm(a @ ns) < 1e-12
    assert nk.null_space(np.eye(3)).shape == (3, 0)


def test_rank_separates_tiny_singular_value():
    # sigma_min / sigma_max = 1e-12 is below tol_rank; squaring via A*A would lose it entirely
    a = np.diag([1.0, 1e-12])
    assert nk.rank_tol(a) == 1
    b = np.diag([1.0, 1e-8])
    assert nk.rank_tol(b) == 2
    assert nk.spectral_condition(b) == pytest.approx(1e8)


def test_spectral_condition():
    assert nk.spectral_condition(np.diag([4.0, 1.0, 2.0])) == pytest.approx(4.0)
    with pytest.raises(SingularMatrix):
        nk.spectral_condition(np.ones((2, 2)))


@given(seeds, st.integers(1, 6))
def test_simultaneous_diagonalization(seed, n):
    rng = np.random.default_rng(seed)
    w, _ = np.linalg.qr(cgauss(rng, (n, n)))
    # repeated eigenvalues in a force the refinement step on b
    da = np.repeat(cgauss(rng, (n + 1) // 2), 2)[:n]
    a = w @ np.diag(da) @ w.conj().T
    b = w @ np.diag(cgauss(rng, n)) @ w.conj().T
    u, d_a, d_b = nk.simultaneous_diag_commuting_normal(a, b)
    for m, d in ((a, d_a), (b, d_b)):
        conj = u @ m @ u.conj().T
        off = conj - np.diag(np.diag(conj))
        assert np.linalg.norm(off) <= 1e-7 * (1 + np.linalg.norm(m))
        assert np.allclose(np.diag(conj), d, atol=1e-8 * (1 + np.linalg.norm(m)))


def test_simultaneous_diag_rejects_non_normal():
    with pytest.raises(NotNormal):
        nk.simultaneous_diag_commuting_normal(np.array([[0, 1], [0, 0]]), np.eye(2))


def test_commute_and_normal_predicates():
    x = np.array([[0, 1], [1, 0]])
    z = np.array([[1, 0], [0, -1]])
    assert nk.commute(x, x) and not nk.commute(x, z)
    assert nk.commutator_gap(x, z) == pytest.approx(np.sqrt(8))
    assert nk.is_normal(x) and not nk.is_normal(np.array([[1, 1], [0, 1]]))
