"""Ranges of translation-invariant spin chains.

For the Ising chain with couplings (zz, z, x)/N, the supporting plane with
normal (J, h, alpha) touches the range at the ground state of
-(J zz + h z + alpha x). Sampling directions therefore maps out the ground
states of the whole three-parameter family at once.
"""

import numpy as np

from jnr import boundary_general, ising_observables, sample_directions, two_qubit_examples
from jnr.boundary import inner_polytope

for N in (4, 6, 8):
    obs = ising_observables(N)
    pts = np.array([bp.point for bp in boundary_general(obs, sample_directions(3, 300, "fibonacci3d"))])
    hull = inner_polytope(pts)
    print(f"N = {N}: {len(pts)} boundary points, {len(hull.vertices)} hull vertices, "
          f"<zz> range [{pts[:, 0].min():.3f}, {pts[:, 0].max():.3f}]")

# %% Two-qubit examples: a bicone and the hull of an ellipse and a segment.
for name, obs in two_qubit_examples().items():
    pts = np.array([bp.point for bp in boundary_general(obs, sample_directions(3, 400, "fibonacci3d"))])
    print(f"{name}: extent {np.ptp(pts, axis=0).round(4)}")
