"""Separable numerical range of bipartite observables.

The separable range restricts the expectation map to mixtures of product
states. Its support function in direction ``n`` is the maximum of
``<a (x) b| n.F |a (x) b>`` over unit vectors ``a``, ``b``, which is computed
here by the seesaw: alternately fixing one factor and taking the top
eigenvector of the effective operator on the other. Each half step can only
increase the objective, so the iteration converges, but possibly to a local
maximum. Returned values are therefore attained lower bounds.
"""

from dataclasses import dataclass, field

import numpy as np

from .boundary import BoundaryPoint, as_observable_set
from .errors import DimensionMismatch, NonUnitaryInput
from .linalg import as_hermitian, derive_rng, partial_transpose, random_pure_state

DEFAULT_RESTARTS = 20
DEFAULT_MAX_ITERS = 500
DEFAULT_CONV_TOL = 1e-11


@dataclass(frozen=True)
class ProductState:
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def vector(self):
        return np.kron(self.alpha, self.beta)

    def density(self):
        v = self.vector
        return np.outer(v, v.conj())


@dataclass
class SeesawResult:
    value: float
    state: ProductState
    iterations: int
    restarts_used: int
    trace: list = field(default_factory=list)


def _top(M):
    w, V = np.linalg.eigh(M)
    return w[-1], V[:, -1]


def _seesaw_once(H4, alpha, beta, max_iters, conv_tol):
    trace = [float(np.real(np.einsum("i,k,ikjl,j,l->", alpha.conj(), beta.conj(), H4, alpha, beta)))]
    it = 0
    for it in range(1, max_iters + 1):
        A_eff = np.einsum("k,ikjl,l->ij", beta.conj(), H4, beta)
        _, alpha = _top((A_eff + A_eff.conj().T) / 2)
        B_eff = np.einsum("i,ikjl,j->kl", alpha.conj(), H4, alpha)
        value, beta = _top((B_eff + B_eff.conj().T) / 2)
        trace.append(float(value))
        if trace[-1] - trace[-2] < conv_tol:
            break
    return alpha, beta, it, trace


def max_product_expectation(H, dims, restarts=DEFAULT_RESTARTS, max_iters=DEFAULT_MAX_ITERS,
                            conv_tol=DEFAULT_CONV_TOL, seed=0, task=0):
    """Seesaw maximum of ``<a (x) b|H|a (x) b>`` over product states.

    Runs ``restarts`` seeded starts and keeps the best (ties go to the lowest
    restart index). The value is attained by the returned state, so it is a
    lower bound on the true product-state maximum.
    """
    H = as_hermitian(H)
    d_a, d_b = (int(x) for x in dims)
    if H.shape[0] != d_a * d_b:
        raise DimensionMismatch(f"operator dim {H.shape[0]} is not {d_a}*{d_b}")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    H4 = H.reshape(d_a, d_b, d_a, d_b)
    best = None
    for r in range(restarts):
        rng = derive_rng(seed, "separable", task * 1_000_003 + r)
        alpha = random_pure_state(d_a, rng)
        beta = random_pure_state(d_b, rng)
        alpha, beta, iters, trace = _seesaw_once(H4, alpha, beta, max_iters, conv_tol)
        if best is None or trace[-1] > best[0]:
            best = (trace[-1], alpha, beta, iters, trace)
    _, alpha, beta, iters, trace = best
    state = ProductState(alpha, beta)
    v = state.vector
    value = float(np.real(np.vdot(v, H @ v)))
    return SeesawResult(value, state, iters, restarts, trace)


def min_product_expectation(H, dims, **kwargs):
    """Seesaw minimum over product states (an attained upper bound)."""
    res = max_product_expectation(-as_hermitian(H), dims, **kwargs)
    res.value = -res.value
    res.trace = [-t for t in res.trace]
    return res


def separable_boundary(obs, dims, directions, restarts=DEFAULT_RESTARTS, max_iters=DEFAULT_MAX_ITERS,
                       conv_tol=DEFAULT_CONV_TOL, seed=0):
    """Attained points of the separable range, one per direction.

    Their convex hull is an inner approximation of the separable range.
    """
    obs = as_observable_set(obs)
    out = []
    for i, n in enumerate(np.atleast_2d(np.asarray(directions, dtype=float))):
        res = max_product_expectation(obs.combine(n), dims, restarts, max_iters, conv_tol, seed, task=i)
        point = obs.expectations_pure(res.state.vector)
        out.append(BoundaryPoint(point, n, float(n @ point), 1))
    return out


PSI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def bell_witness_pair(U, tol=1e-10):
    """Witness ``X = (|psi+><psi+|)^T2`` and its local rotation ``X_U``.

    ``X_U = ((U (x) 1)|psi+><psi+|(U^dagger (x) 1))^T2`` with the normalized
    ``|psi+> = (|00> + |11>)/sqrt(2)``.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise NonUnitaryInput(f"U must be 2x2, got shape {U.shape}")
    err = np.max(np.abs(U.conj().T @ U - np.eye(2)))
    if err > tol:
        raise NonUnitaryInput(f"U deviates from unitarity by {err:.3e}")
    P = np.outer(PSI_PLUS, PSI_PLUS.conj())
    UI = np.kron(U, np.eye(2))
    X = as_hermitian(partial_transpose(P, (2, 2), 1))
    X_U = as_hermitian(partial_transpose(UI @ P @ UI.conj().T, (2, 2), 1))
    return X, X_U
