import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jnr.errors import DimensionMismatch, NonHermitianInput, NonOrthonormalBasis
from jnr.linalg import (
    PAULI_X, PAULI_Y, PAULI_Z, as_hermitian, compress, derive_rng, eig_hermitian, expectation,
    gibbs_state, ground_state_mixture, is_density, kron, lambda_max_projector, lambda_min_projector,
    partial_trace, partial_transpose, random_density, random_hermitian,
)

from conftest import CUSP_H0, CUSP_H1, FLAT_H1


def test_eig_examples():
    np.testing.assert_allclose(eig_hermitian(PAULI_Z).eigenvalues, [-1, 1])
    np.testing.assert_allclose(eig_hermitian(FLAT_H1).eigenvalues, [-np.sqrt(2), 0, np.sqrt(2)], atol=1e-14)
    dec = eig_hermitian(np.eye(3))
    np.testing.assert_allclose(dec.eigenvalues, 1)
    np.testing.assert_allclose(dec.eigenvectors.conj().T @ dec.eigenvectors, np.eye(3), atol=1e-14)


def test_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        eig_hermitian(np.array([[0, 1], [2, 0]]))
    with pytest.raises(DimensionMismatch):
        as_hermitian(np.zeros((2, 3)))


def test_tiny_asymmetry_is_symmetrized():
    H = np.array([[1.0, 1 + 1e-12], [1.0, 0.0]])
    np.testing.assert_array_equal(as_hermitian(H), as_hermitian(H).T)


def test_lambda_max_projector_examples():
    top = lambda_max_projector(-np.diag([0.0, 0.0, 1.0]))
    assert top.eigenvalue == 0 and top.multiplicity == 2
    np.testing.assert_allclose(top.projector, np.diag([1, 1, 0]), atol=1e-14)
    top = lambda_max_projector(PAULI_X)
    np.testing.assert_allclose(top.projector, 0.5 * np.ones((2, 2)), atol=1e-14)
    top = lambda_max_projector(CUSP_H0)
    assert top.multiplicity == 1
    assert top.eigenvalue == pytest.approx(1.0)


def test_lambda_min_projector():
    low = lambda_min_projector(CUSP_H0)
    assert low.eigenvalue == pytest.approx(-2.0)
    np.testing.assert_allclose(low.projector, np.diag([0, 0, 1]), atol=1e-14)


def test_expectation_examples():
    assert expectation(PAULI_Z, np.diag([1.0, 0.0])) == 1.0
    assert expectation(PAULI_X, np.eye(2) / 2) == 0.0
    assert expectation(CUSP_H1, np.diag([1.0, 0, 0])) == 1.0
    with pytest.raises(DimensionMismatch):
        expectation(PAULI_Z, np.eye(3) / 3)


def test_gibbs_examples():
    np.testing.assert_array_equal(gibbs_state(PAULI_Z, 0.0), np.eye(2) / 2)
    for beta in (0.3, 1.0, 7.0):
        assert expectation(PAULI_Z, gibbs_state(PAULI_Z, beta)) == pytest.approx(-np.tanh(beta), abs=1e-14)
    # large beta: ground projector
    H = np.diag([0.0, 1.0, 3.0])
    beta = 50 * np.log(1e12) / 3.0
    rho = gibbs_state(H, beta)
    assert np.abs(np.linalg.eigvalsh(rho - np.diag([1.0, 0, 0]))).sum() < 1e-9
    rho = gibbs_state(H, 1e4)
    assert np.all(np.isfinite(rho))


def test_ground_mixture_degenerate():
    np.testing.assert_allclose(ground_state_mixture(np.diag([0.0, 0.0, 1.0])), np.diag([0.5, 0.5, 0]), atol=1e-14)


def test_partial_trace_examples():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    bell = np.outer(psi, psi)
    np.testing.assert_allclose(partial_trace(bell, (2, 2), keep=0), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace(np.eye(4) / 4, (2, 2)), np.eye(2) / 2)
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4), (2, 3))


def test_partial_transpose_examples(rng):
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    bell = np.outer(psi, psi)
    np.testing.assert_allclose(np.linalg.eigvalsh(partial_transpose(bell, (2, 2))), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)
    A, B = random_hermitian(2, rng), random_hermitian(3, rng)
    np.testing.assert_allclose(partial_transpose(np.kron(A, B), (2, 3)), np.kron(A, B.T), atol=1e-14)
    np.testing.assert_allclose(partial_transpose(np.kron(A, B), (2, 3), which=0), np.kron(A.T, B), atol=1e-14)
    M = random_hermitian(6, rng)
    np.testing.assert_array_equal(partial_transpose(partial_transpose(M, (2, 3)), (2, 3)), M)


def test_kron_and_compress():
    np.testing.assert_array_equal(kron(PAULI_Z, np.eye(2)).real, np.diag([1, 1, -1, -1]))
    e = np.eye(3)[:, :2]
    np.testing.assert_array_equal(compress(np.diag([1.0, 2, 3]), e), np.diag([1.0, 2]))
    np.testing.assert_array_equal(compress(FLAT_H1, e), [[0, 1], [1, 0]])
    with pytest.raises(NonOrthonormalBasis):
        compress(FLAT_H1, np.ones((3, 2)))


def test_paulis():
    for P in (PAULI_X, PAULI_Y, PAULI_Z):
        np.testing.assert_array_equal(P @ P, np.eye(2))
    assert PAULI_Y[0, 1] == 1j


def test_derive_rng_is_stable():
    a = derive_rng(3, "separable", 5).normal(size=4)
    b = derive_rng(3, "separable", 5).normal(size=4)
    c = derive_rng(3, "separable", 6).normal(size=4)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_reconstruction(d, seed):
    H = random_hermitian(d, np.random.default_rng(seed))
    dec = eig_hermitian(H)
    norm = np.linalg.norm(H, 2)
    assert np.linalg.norm(H - dec.reconstruct(), 2) <= 1e-9 * (1 + norm)
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    V = dec.eigenvectors
    resid = np.linalg.norm(H @ V - V * dec.eigenvalues, axis=0)
    assert np.all(resid <= 1e-10 * (1 + norm))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from([0.0, 1.0, 10.0, 100.0]))
def test_gibbs_is_density(d, seed, beta):
    H = random_hermitian(d, np.random.default_rng(seed))
    assert is_density(gibbs_state(H, beta))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_expectation_real(d, seed):
    rng = np.random.default_rng(seed)
    F, rho = random_hermitian(d, rng), random_density(d, rng)
    assert isinstance(expectation(F, rho), float)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_partial_trace_of_product(da, db, seed):
    rng = np.random.default_rng(seed)
    ra, rb = random_density(da, rng), random_density(db, rng)
    np.testing.assert_allclose(partial_trace(np.kron(ra, rb), (da, db), keep=0), ra, atol=1e-12)
    np.testing.assert_allclose(partial_trace(np.kron(ra, rb), (da, db), keep=1), rb, atol=1e-12)
