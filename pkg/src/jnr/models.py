"""Spin-1/2 chain and two-qubit observables.

Sites are numbered 1..N from the left tensor factor. Chains are periodic:
the bond sum runs over ``i = 1..N`` with site ``i+1`` taken modulo ``N``,
so for ``N = 2`` the single bond is counted twice.
"""

from dataclasses import dataclass

import numpy as np

from .boundary import ObservableSet
from .errors import IndexOutOfRange
from .linalg import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, PAULIS, kron

MAX_SITES = 12


def _check_sites(N):
    if N < 2:
        raise ValueError(f"a chain needs at least 2 sites, got {N}")
    if N > MAX_SITES:
        raise ValueError(f"dense representation is limited to {MAX_SITES} sites, got {N}")


def _real_if_possible(M):
    return M.real.copy() if not np.any(M.imag) else M


def site_operator(N, i, axis):
    """Pauli ``axis`` acting on site ``i`` (1-based) of an ``N``-site chain."""
    if not 1 <= i <= N:
        raise IndexOutOfRange(f"site {i} outside 1..{N}")
    if axis not in PAULIS:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}")
    factors = [IDENTITY_2] * N
    factors[i - 1] = PAULIS[axis]
    return _real_if_possible(kron(*factors))


def pair_operator(N, i, j, axis):
    """``s_axis^(i) s_axis^(j)`` for distinct sites, built as one Kronecker product."""
    if i == j:
        raise ValueError("sites must differ")
    for site in (i, j):
        if not 1 <= site <= N:
            raise IndexOutOfRange(f"site {site} outside 1..{N}")
    factors = [IDENTITY_2] * N
    factors[i - 1] = PAULIS[axis]
    factors[j - 1] = PAULIS[axis]
    return _real_if_possible(kron(*factors))


def total_spin(N, axis):
    """``S_axis = sum_i s_axis^(i)``."""
    return sum(site_operator(N, i, axis) for i in range(1, N + 1))


def bond_sum(N, axis):
    """``sum_i s^(i+1 mod N) s^(i)`` along ``axis`` on a ring."""
    out = 0
    for i in range(1, N + 1):
        j = i % N + 1
        out = out + pair_operator(N, j, i, axis)
    return out


@dataclass(frozen=True)
class SpinChainSpec:
    N: int
    terms: ObservableSet
    periodic: bool = True


def cyclic_shift(N):
    """Permutation operator moving site ``i`` to site ``i+1`` (mod N)."""
    d = 2 ** N
    idx = np.arange(d)
    bits = (idx[:, None] >> np.arange(N - 1, -1, -1)) & 1
    shifted = np.roll(bits, 1, axis=1)
    target = shifted @ (1 << np.arange(N - 1, -1, -1))
    P = np.zeros((d, d))
    P[target, idx] = 1.0
    return P


def ising_observables(N):
    """ZZ coupling, z field and x field, each divided by ``N``.

    A supporting plane with normal ``(J, h, alpha)`` touches the range at the
    image of the ground state of ``-(J N H1 + h N H2 + alpha N H3)``.
    """
    _check_sites(N)
    H1 = bond_sum(N, "z") / N
    H2 = total_spin(N, "z") / N
    H3 = total_spin(N, "x") / N
    return ObservableSet((H1, H2, H3), ("zz", "z", "x"))


def xxzz_spin_observables(N):
    """XX coupling, ZZ coupling and total spin length ``S^2 / (N (N+1))``."""
    _check_sites(N)
    H1 = bond_sum(N, "x") / N
    H2 = bond_sum(N, "z") / N
    H3 = total_spin_squared(N) / (N * (N + 1))
    return ObservableSet((H1, H2, H3), ("xx", "zz", "S2"))


def total_spin_squared(N):
    """``S_x^2 + S_y^2 + S_z^2 = 3N + 2 sum_{i<j} sigma^(i) . sigma^(j)``."""
    out = 3.0 * N * np.eye(2 ** N)
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            for a in "xyz":
                out = out + 2 * pair_operator(N, i, j, a).real
    return out


def spin_chain(model, N):
    builders = {"ising": ising_observables, "xxzz": xxzz_spin_observables}
    return SpinChainSpec(N, builders[model](N))


def _dipolar():
    XX = np.kron(PAULI_X, PAULI_X)
    heis = sum(np.kron(S, S) for S in (PAULI_X, PAULI_Y, PAULI_Z))
    return (3 * XX - heis).real


def _field_z():
    return (np.kron(PAULI_Z, IDENTITY_2) + np.kron(IDENTITY_2, PAULI_Z)).real


def two_qubit_examples():
    """The two-qubit sets whose ranges are a bicone and an ellipse-segment hull."""
    bicone = ObservableSet(
        (_dipolar(), _field_z(), np.kron(PAULI_Y, PAULI_Y).real),
        ("dipolar", "field_z", "yy"),
    )
    ellipse_segment = ObservableSet(
        (_dipolar(), _field_z(), np.kron(PAULI_Z, PAULI_Z).real),
        ("dipolar", "field_z", "zz"),
    )
    return {"bicone": bicone, "ellipse_segment": ellipse_segment}


def model_observables(model, N=None):
    """Observable set for a CLI model name."""
    if model == "ising":
        return ising_observables(N)
    if model == "xxzz":
        return xxzz_spin_observables(N)
    examples = two_qubit_examples()
    key = model.replace("-", "_")
    if key in examples:
        return examples[key]
    raise ValueError(f"unknown model {model!r}")
