"""Ground-state analysis of linear Hamiltonian families.

``H(theta) = cos(theta) H0 + sin(theta) H1`` sweeps every direction of the
plane, so its ground energy is minus the support function of ``L(H0, H1)``
in direction ``-(cos, sin)``. Level crossings of the ground state appear as
kinks in that function; flat faces of the range are reported alongside.
"""

from dataclasses import dataclass, field

import numpy as np

from .boundary import ObservableSet
from .classify import detect_flat_parts
from .errors import DimensionMismatch, QueryOutsideBracket
from .linalg import GAP_TOL, as_hermitian

BISECT_WIDTH = 1e-10
SECTOR_RANK_TOL = 1e-8
SECTOR_OVERLAP_TOL = 1e-6


@dataclass
class SpectrumSweep:
    thetas: np.ndarray
    levels: np.ndarray
    ground_gap: np.ndarray
    H0: np.ndarray = field(repr=False, default=None)
    H1: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class Crossing:
    theta: float
    bracket: tuple
    gap: float
    # one-sided derivatives of the ground energy
    slopes: tuple


@dataclass
class TransitionReport:
    crossings: list
    flat_faces: list


def _pair(H0, H1):
    H0, H1 = as_hermitian(H0), as_hermitian(H1)
    if H0.shape != H1.shape:
        raise DimensionMismatch(f"H0 has shape {H0.shape}, H1 has shape {H1.shape}")
    return H0, H1


def _hamiltonian(H0, H1, theta):
    return np.cos(theta) * H0 + np.sin(theta) * H1


def spectrum_sweep(H0, H1, num_thetas):
    """Full spectra of ``cos(t) H0 + sin(t) H1`` on ``num_thetas`` angles in [0, 2pi)."""
    if num_thetas < 8:
        raise ValueError("num_thetas must be at least 8")
    H0, H1 = _pair(H0, H1)
    thetas = 2 * np.pi * np.arange(num_thetas) / num_thetas
    mats = np.cos(thetas)[:, None, None] * H0 + np.sin(thetas)[:, None, None] * H1
    levels = np.linalg.eigvalsh(mats)
    gap = levels[:, 1] - levels[:, 0] if levels.shape[1] > 1 else np.full(num_thetas, np.inf)
    return SpectrumSweep(thetas, levels, gap, H0, H1)


def _ground(H0, H1, theta):
    w, V = np.linalg.eigh(_hamiltonian(H0, H1, theta))
    return w, V[:, 0]


def _invariant_span(ops, psi):
    """Smallest subspace containing ``psi`` and invariant under ``ops``."""
    Q = psi[:, None] / np.linalg.norm(psi)
    while True:
        W = np.hstack([Q] + [F @ Q for F in ops])
        U, s, _ = np.linalg.svd(W, full_matrices=False)
        r = int(np.sum(s > SECTOR_RANK_TOL * s[0]))
        if r == Q.shape[1]:
            return U[:, :r]
        Q = U[:, :r]


def decoupled(H0, H1, psi_a, psi_b):
    """True when ``psi_a`` and ``psi_b`` live in sectors that neither operator mixes."""
    Q = _invariant_span((H0, H1), psi_a)
    return bool(np.linalg.norm(Q.conj().T @ psi_b) < SECTOR_OVERLAP_TOL)


def _bisect(H0, H1, lo, hi):
    _, psi_lo = _ground(H0, H1, lo)
    _, psi_hi = _ground(H0, H1, hi)
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        _, psi = _ground(H0, H1, mid)
        if abs(np.vdot(psi, psi_lo)) >= abs(np.vdot(psi, psi_hi)):
            lo, psi_lo = mid, psi
        else:
            hi, psi_hi = mid, psi
    return lo, hi, psi_lo, psi_hi


def detect_ground_crossings(sweep, gap_tol=GAP_TOL):
    """Ground-level crossings of the sweep and flat faces of ``L(H0, H1)``.

    Candidate intervals are those where the ground state jumps between grid
    points or the gap closes on the grid. Each candidate is bisected on the
    identity of the ground branch until its width is below 1e-10. It is
    reported as a crossing when the gap at the refined angle vanishes and
    the two branch states lie in sectors decoupled by both ``H0`` and
    ``H1`` (a genuine level crossing rather than the degenerate point of a
    single coupled sector).
    """
    H0, H1 = sweep.H0, sweep.H1
    thetas, gap = sweep.thetas, sweep.ground_gap
    m = len(thetas)
    width = np.max(sweep.levels[:, -1] - sweep.levels[:, 0])
    tol = gap_tol * (1.0 + width)
    grounds = [_ground(H0, H1, t)[1] for t in thetas]
    closed = gap <= tol
    intervals = set()
    for i in range(m):
        j = (i + 1) % m
        if closed[i] and closed[j]:
            continue
        if closed[i]:
            intervals.add(((i - 1) % m, j))
        elif not closed[j] and abs(np.vdot(grounds[i], grounds[j])) < 0.5:
            intervals.add((i, j))
    crossings = []
    for i, j in sorted(intervals):
        if closed[i] or closed[j]:
            continue
        lo = thetas[i]
        hi = thetas[j] + (2 * np.pi if j <= i else 0.0)
        a, b, psi_a, psi_b = _bisect(H0, H1, lo, hi)
        mid = 0.5 * (a + b)
        w, _ = _ground(H0, H1, mid)
        g = w[1] - w[0]
        if g > max(tol, 1e3 * BISECT_WIDTH * (1.0 + width)):
            continue
        if not decoupled(H0, H1, psi_a, psi_b):
            continue
        dH_a = -np.sin(a) * H0 + np.cos(a) * H1
        dH_b = -np.sin(b) * H0 + np.cos(b) * H1
        slopes = (float(np.vdot(psi_a, dH_a @ psi_a).real), float(np.vdot(psi_b, dH_b @ psi_b).real))
        theta = float(np.mod(mid, 2 * np.pi))
        crossings.append(Crossing(theta, (float(np.mod(a, 2 * np.pi)), float(np.mod(b, 2 * np.pi))), float(g), slopes))
    crossings.sort(key=lambda c: c.theta)
    flat = detect_flat_parts(ObservableSet((H0, H1)), gap_tol=gap_tol)
    return TransitionReport(crossings, flat)


def ground_energy(H0, H1, a):
    """``lambda_min(H0 + a H1)``."""
    H0, H1 = _pair(H0, H1)
    return float(np.linalg.eigvalsh(H0 + a * H1)[0])


def ground_data(H0, H1, a, gap_tol=GAP_TOL):
    """``(E, dE/da, gap)`` at ``a``; ``dE`` is None where the ground level is
    too close to degenerate for the Hellmann-Feynman derivative.
    """
    H0, H1 = _pair(H0, H1)
    w, V = np.linalg.eigh(H0 + a * H1)
    gap = float(w[1] - w[0]) if len(w) > 1 else np.inf
    tol = 10 * gap_tol * (1.0 + w[-1] - w[0])
    dE = float(np.vdot(V[:, 0], H1 @ V[:, 0]).real) if gap > tol else None
    return float(w[0]), dE, gap


def energy_bounds(H0, H1, known, query_a):
    """Lower and upper bounds on ``lambda_min(H0 + query_a H1)``.

    ``known`` holds ``(a, E, dE)`` triples, ``dE`` possibly None. Concavity
    of the ground energy in ``a`` makes the chord between the bracketing
    known points a lower bound and every tangent line an upper bound.
    """
    pts = sorted((float(a), float(E), None if dE is None else float(dE)) for a, E, dE in known)
    if not pts:
        raise ValueError("at least one known point is required")
    q = float(query_a)
    exact = [E for a, E, _ in pts if a == q]
    if exact:
        return exact[0], exact[0]
    left = [p for p in pts if p[0] < q]
    right = [p for p in pts if p[0] > q]
    if not left or not right:
        raise QueryOutsideBracket(f"query {q} lies outside the known range [{pts[0][0]}, {pts[-1][0]}]")
    (a0, E0, _), (a1, E1, _) = left[-1], right[0]
    t = (q - a0) / (a1 - a0)
    lower = (1 - t) * E0 + t * E1
    tangents = [E + dE * (q - a) for a, E, dE in pts if dE is not None]
    upper = min(tangents) if tangents else np.inf
    return lower, upper
