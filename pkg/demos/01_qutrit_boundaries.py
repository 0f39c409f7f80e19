"""Boundaries of two-operator qutrit ranges, their flat parts and class.

Two small pairs are enough to see both kinds of nonsmooth boundary: a cusp
(two segments meeting at an external point) and a single flat face.
"""

import numpy as np

from jnr import ObservableSet, boundary_sweep_2d, classify_k2_qutrit, detect_flat_parts

H0 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, -2]], dtype=float)
H1 = np.diag([1.0, -1.0, 0.0])

# %% The range of (H0, H1) is the hull of the unit circle and the point (-2, 0).
pts = np.array([bp.point for bp in boundary_sweep_2d(H0, H1, 720)])
print("boundary points:", len(pts))
print("leftmost point:", pts[np.argmin(pts[:, 0])])

for part in detect_flat_parts(ObservableSet((H0, H1))):
    print(part.kind, "from", np.round(part.endpoints[0], 6), "to", np.round(part.endpoints[1], 6))
print("class:", classify_k2_qutrit(H0, H1).label)

# %% A pair with one horizontal face and no cusp.
G0 = np.diag([0.0, 0.0, 1.0])
G1 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
(face,) = detect_flat_parts(ObservableSet((G0, G1)))
print("\nflat face endpoints:", face.endpoints.round(12).tolist())
print("class:", classify_k2_qutrit(G0, G1).label)

# %% Commuting operators give a triangle (the hull of joint eigenvalues).
print("\ncommuting pair:", classify_k2_qutrit(np.diag([1.0, 0, -1]), np.diag([0.0, 1, -1])).label)
