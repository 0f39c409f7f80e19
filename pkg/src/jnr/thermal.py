"""Thermal range: expectation vectors of Gibbs states of ``n . F``.

``b_beta(n)`` is the expectation vector of ``exp(-beta n.F)/Z``. Each point
keeps the direction ``n`` that generated it (its "fake" normal). As
``beta -> inf`` the Gibbs state concentrates on the ground space, so
``b_inf(n)`` lies on the face of the joint numerical range that minimizes
``n . x``, i.e. the support point in direction ``-n``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .boundary import as_observable_set, unit_direction
from .linalg import GAP_TOL, gibbs_state, ground_state_mixture

INF = math.inf


@dataclass(frozen=True)
class ThermalPoint:
    point: np.ndarray
    fake_normal: np.ndarray
    beta: float


def thermal_point(obs, n, beta, gap_tol=GAP_TOL):
    """``b_beta(n)``; ``beta = math.inf`` gives the ground-space mixture."""
    obs = as_observable_set(obs)
    n = unit_direction(n)
    H = obs.combine(n)
    if beta == 0:
        return ThermalPoint(obs.center(), n, 0.0)
    if beta == INF:
        rho = ground_state_mixture(H, gap_tol)
    else:
        rho = gibbs_state(H, beta)
    return ThermalPoint(obs.expectations(rho), n, float(beta))


def thermal_range_sweep(obs, betas, directions, gap_tol=GAP_TOL):
    """Thermal points for every (beta, direction) pair, beta-major."""
    obs = as_observable_set(obs)
    betas = list(betas)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if not betas or len(directions) == 0:
        raise ValueError("betas and directions must be nonempty")
    return [thermal_point(obs, n, beta, gap_tol) for beta in betas for n in directions]


def thermal_energy(obs, n, beta):
    """``n . b_beta(n)``, the thermal energy of ``n . F``."""
    tp = thermal_point(obs, n, beta)
    return float(tp.fake_normal @ tp.point)
