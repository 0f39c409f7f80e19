"""Hermitian linear algebra, density matrices and bipartite utilities.

Operators are plain numpy arrays. Functions that accept an operator run it
through :func:`as_hermitian`, which rejects inputs that are not Hermitian
within a relative tolerance and returns the symmetrized matrix.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NonHermitianInput,
    NonOrthonormalBasis,
)

HERMITICITY_TOL = 1e-10
# Degeneracy threshold relative to the spectral width; shared by every module.
GAP_TOL = 1e-8
ORTHONORMAL_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
# Sign convention with +i in the upper right corner.
PAULI_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

PAULIS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}


def as_hermitian(H, tol=HERMITICITY_TOL):
    """Validate ``H`` and return ``(H + H^dagger)/2``.

    Accepts when ``max|H - H^dagger| <= tol * (1 + max|H|)``. Real input stays
    real so that large real Hamiltonians do not double their memory.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {H.shape}")
    if not np.iscomplexobj(H):
        H = H.astype(float)
    elif not np.any(H.imag):
        H = H.real.astype(float)
    deviation = np.max(np.abs(H - H.conj().T))
    limit = tol * (1.0 + np.max(np.abs(H)))
    if deviation > limit:
        raise NonHermitianInput(deviation, limit)
    return (H + H.conj().T) / 2


def spectral_width(eigenvalues):
    return float(eigenvalues[-1] - eigenvalues[0])


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def eig_hermitian(H):
    """Full spectrum of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK's divide-and-conquer Hermitian driver.
    """
    H = as_hermitian(H)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return EigenDecomposition(w, V)


@dataclass(frozen=True)
class EigenspaceProjector:
    projector: np.ndarray
    eigenvalue: float
    multiplicity: int
    basis: np.ndarray


def _top_block(w, V, gap_tol):
    width = spectral_width(w)
    cut = w[-1] - gap_tol * (1.0 + width)
    m = int(np.count_nonzero(w >= cut))
    basis = V[:, -m:]
    return EigenspaceProjector(
        projector=basis @ basis.conj().T,
        eigenvalue=float(w[-1]),
        multiplicity=m,
        basis=basis,
    )


def lambda_max_projector(H, gap_tol=GAP_TOL):
    """Largest eigenvalue of ``H`` and the projector onto its eigenspace.

    Eigenvalues within ``gap_tol * (1 + spectral width)`` of the maximum are
    counted as degenerate with it.
    """
    if gap_tol <= 0:
        raise ValueError("gap_tol must be positive")
    dec = eig_hermitian(H)
    return _top_block(dec.eigenvalues, dec.eigenvectors, gap_tol)


def lambda_min_projector(H, gap_tol=GAP_TOL):
    """Smallest eigenvalue of ``H`` and its (possibly degenerate) eigenspace."""
    top = lambda_max_projector(-np.asarray(H), gap_tol)
    return EigenspaceProjector(top.projector, -top.eigenvalue, top.multiplicity, top.basis)


def expectation(F, rho):
    """``Tr(rho F)`` as a real number."""
    F = np.asarray(F)
    rho = np.asarray(rho)
    if F.shape != rho.shape:
        raise DimensionMismatch(f"operator shape {F.shape} does not match state shape {rho.shape}")
    # Tr(rho F) = sum_ij rho_ij F_ji
    value = np.sum(rho * F.T)
    scale = 1.0 + np.max(np.abs(F))
    if abs(value.imag) > 1e-12 * scale:
        raise NonHermitianInput(abs(value.imag), 1e-12 * scale)
    return float(value.real)


def expectation_pure(F, psi):
    """``<psi|F|psi>`` for a normalized state vector."""
    F = np.asarray(F)
    psi = np.asarray(psi)
    if F.shape[0] != psi.shape[0]:
        raise DimensionMismatch(f"operator dim {F.shape[0]} does not match vector dim {psi.shape[0]}")
    return float(np.real(np.vdot(psi, F @ psi)))


def pure_density(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(d):
    return np.eye(d, dtype=complex) / d


def is_density(rho, trace_tol=1e-12, psd_tol=1e-10):
    rho = np.asarray(rho)
    try:
        rho = as_hermitian(rho)
    except (NonHermitianInput, DimensionMismatch):
        return False
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        return False
    return bool(np.linalg.eigvalsh(rho)[0] >= -psd_tol)


def gibbs_state(H, beta):
    """Thermal state ``exp(-beta H) / Z``.

    Computed in the eigenbasis with the largest Boltzmann exponent factored
    out, so large ``beta`` cannot overflow.
    """
    beta = float(beta)
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and nonnegative, got {beta}")
    if beta == 0:
        return maximally_mixed(as_hermitian(H).shape[0])
    dec = eig_hermitian(H)
    w, V = dec.eigenvalues, dec.eigenvectors
    exponents = -beta * (w - w[0])
    weights = np.exp(exponents)
    weights /= weights.sum()
    return (V * weights) @ V.conj().T


def ground_state_mixture(H, gap_tol=GAP_TOL):
    """Equal-weight mixture over the ground eigenspace, the zero-temperature limit."""
    ground = lambda_min_projector(H, gap_tol)
    return ground.projector / ground.multiplicity


def _check_bipartite(M, dims):
    d_a, d_b = (int(x) for x in dims)
    M = np.asarray(M)
    if M.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatch(f"matrix of shape {M.shape} does not act on {d_a}x{d_b}")
    return M, d_a, d_b


def partial_trace(rho, dims, keep=0):
    """Reduced state on subsystem ``keep`` (0 for A, 1 for B)."""
    rho, d_a, d_b = _check_bipartite(rho, dims)
    t = rho.reshape(d_a, d_b, d_a, d_b)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 0 or 1, got {keep!r}")


def partial_transpose(X, dims, which=1):
    """Transpose the tensor factor ``which`` (0 for A, 1 for B)."""
    X, d_a, d_b = _check_bipartite(X, dims)
    t = X.reshape(d_a, d_b, d_a, d_b)
    if which == 1:
        t = t.transpose(0, 3, 2, 1)
    elif which == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"which must be 0 or 1, got {which!r}")
    return t.reshape(d_a * d_b, d_a * d_b)


def kron(*ops):
    out = np.ones((1, 1))
    for op in ops:
        out = np.kron(out, op)
    return out


def check_orthonormal(basis, tol=ORTHONORMAL_TOL):
    basis = np.asarray(basis)
    if basis.ndim != 2:
        raise NonOrthonormalBasis("basis must be a 2-D array of columns")
    gram = basis.conj().T @ basis
    err = np.max(np.abs(gram - np.eye(basis.shape[1])))
    if err > tol:
        raise NonOrthonormalBasis(f"basis columns deviate from orthonormality by {err:.3e}")
    return basis


def compress(F, basis):
    """Matrix of ``F`` restricted to the span of orthonormal ``basis`` columns."""
    basis = check_orthonormal(basis)
    F = np.asarray(F)
    if F.shape[0] != basis.shape[0]:
        raise DimensionMismatch(f"operator dim {F.shape[0]} does not match basis dim {basis.shape[0]}")
    C = basis.conj().T @ F @ basis
    return (C + C.conj().T) / 2


def random_hermitian(d, rng, scale=1.0):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (A + A.conj().T) / 2


def random_pure_state(d, rng):
    """Haar-random unit vector from a normalized complex Gaussian."""
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return psi / np.linalg.norm(psi)


def random_density(d, rng, rank=None):
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def derive_rng(seed, module, index=0):
    """Generator keyed by ``(seed, module name, task index)``.

    The key is hashed with CRC32 so results do not depend on task order or
    on ``PYTHONHASHSEED``.
    """
    import zlib

    return np.random.default_rng([int(seed), zlib.crc32(module.encode()), int(index)])
