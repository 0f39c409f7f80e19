import numpy as np
import pytest

from jnr.errors import IndexOutOfRange
from jnr.linalg import PAULI_X, PAULI_Z, as_hermitian
from jnr.models import (
    cyclic_shift, ising_observables, model_observables, site_operator, total_spin_squared,
    two_qubit_examples, xxzz_spin_observables,
)


def test_site_operator_examples():
    np.testing.assert_array_equal(site_operator(2, 1, "z"), np.diag([1, 1, -1, -1]))
    np.testing.assert_array_equal(site_operator(2, 2, "x"), np.kron(np.eye(2), PAULI_X.real))
    s = site_operator(3, 2, "z")
    np.testing.assert_array_equal(s @ s, np.eye(8))
    with pytest.raises(IndexOutOfRange):
        site_operator(3, 4, "z")
    with pytest.raises(IndexOutOfRange):
        site_operator(3, 0, "x")


@pytest.mark.parametrize("N", range(2, 9))
def test_ising_support(N):
    H1, H2, H3 = ising_observables(N).operators
    assert np.linalg.eigvalsh(H1)[-1] == 1.0
    w = np.linalg.eigvalsh(H2)
    assert w[0] == pytest.approx(-1) and w[-1] == pytest.approx(1)
    P = cyclic_shift(N)
    for H in (H1, H2, H3):
        as_hermitian(H)
        assert np.max(np.abs(H @ P - P @ H)) <= 1e-10


def test_ising_two_sites():
    H1 = ising_observables(2).operators[0]
    np.testing.assert_array_equal(H1, np.kron(PAULI_Z, PAULI_Z).real)


@pytest.mark.parametrize("N", range(2, 7))
def test_xxzz(N):
    H1, H2, H3 = xxzz_spin_observables(N).operators
    assert np.linalg.eigvalsh(H1)[-1] == pytest.approx(1.0)
    P = cyclic_shift(N)
    for H in (H1, H2, H3):
        assert np.max(np.abs(H @ P - P @ H)) <= 1e-10


def test_total_spin_two_sites():
    np.testing.assert_allclose(np.linalg.eigvalsh(total_spin_squared(2)), [0, 8, 8, 8], atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(xxzz_spin_observables(2).operators[2]), [0, 4 / 3, 4 / 3, 4 / 3], atol=1e-12)


def test_two_qubit_examples():
    ex = two_qubit_examples()
    bicone = ex["bicone"]
    np.testing.assert_array_equal(bicone.operators[1], np.diag([2.0, 0, 0, -2]))
    for obs in ex.values():
        assert obs.dim == 4
    # local flip conjugation maps (H1, H2, H3) to (H1, -H2, H3)
    F = np.kron(PAULI_X, PAULI_X).real
    H1, H2, H3 = bicone.operators
    np.testing.assert_allclose(F @ H1 @ F, H1)
    np.testing.assert_allclose(F @ H2 @ F, -H2)
    np.testing.assert_allclose(F @ H3 @ F, H3)


def test_size_limits():
    with pytest.raises(ValueError):
        ising_observables(1)
    with pytest.raises(ValueError):
        ising_observables(13)
    with pytest.raises(ValueError):
        model_observables("heisenberg", 3)
