"""Thermal range: expectation vectors of Gibbs states exp(-beta n.F)/Z.

At beta = 0 every direction maps to the image of the maximally mixed state.
As beta grows the points move out to the face minimizing n.F.
"""

import math

import numpy as np

from jnr import ObservableSet, sample_directions, thermal_point, thermal_range_sweep

H0 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, -2]], dtype=float)
H1 = np.diag([1.0, -1.0, 0.0])
obs = ObservableSet((H0, H1))
D = sample_directions(2, 8, "grid2d")

for beta in (0.0, 0.5, 2.0, math.inf):
    pts = np.array([tp.point for tp in thermal_range_sweep(obs, [beta], D)])
    radius = np.linalg.norm(pts - obs.center(), axis=1).max()
    print(f"beta = {beta:>4}: max distance from center {radius:.4f}")

# The energy n . b_beta(n) decreases toward lambda_min(n . F).
n = np.array([0.6, 0.8])
for beta in (0.1, 1.0, 10.0, 100.0):
    tp = thermal_point(obs, n, beta)
    print(f"beta = {beta:>5}: energy {n @ tp.point:.6f}")
print("lambda_min:", np.linalg.eigvalsh(obs.combine(n))[0])
