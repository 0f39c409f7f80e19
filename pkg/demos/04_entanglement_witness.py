"""A linear witness versus the separable range.

X is the partial transpose of the Bell projector. It has a negative
eigenvalue, yet on product states its expectation never drops below zero.
The seesaw finds product states attaining the separable boundary.
"""

import numpy as np

from jnr import ObservableSet, bell_witness_pair, boundary_general, sample_directions, separable_boundary
from jnr.separable import min_product_expectation

theta = 0.6
U = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
X, XU = bell_witness_pair(U)
print("spectrum of X:", np.linalg.eigvalsh(X).round(12))
print("min over product states:", round(min_product_expectation(X, (2, 2)).value, 12))

obs = ObservableSet((X, XU))
D = sample_directions(2, 36, "grid2d")
full = np.array([bp.point for bp in boundary_general(obs, D)])
sep = np.array([bp.point for bp in separable_boundary(obs, (2, 2), D, restarts=10)])
print("lowest <X> on the full range:     ", full[:, 0].min().round(6))
print("lowest <X> on the separable range:", sep[:, 0].min().round(6))
