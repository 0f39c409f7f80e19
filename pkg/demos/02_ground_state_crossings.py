"""Ground-state level crossings of cos(t) H0 + sin(t) H1.

The ground energy at angle t is minus the support function of the range in
direction -(cos t, sin t). A cusp of the range shows up as a kink, where two
levels from decoupled sectors swap order.
"""

import numpy as np

from jnr import detect_ground_crossings, energy_bounds, ground_data, spectrum_sweep

H0 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, -2]], dtype=float)
H1 = np.diag([1.0, -1.0, 0.0])

sweep = spectrum_sweep(H0, H1, 720)
report = detect_ground_crossings(sweep)
for c in report.crossings:
    t = np.angle(np.exp(1j * c.theta))
    print(f"crossing at t = {t:+.10f}  (pi/3 = {np.pi / 3:.10f}), slopes {np.round(c.slopes, 6)}")
# The levels are +-1 and -2 cos t, so the ground level switches where 2 cos t = 1.

# %% The ground energy of H0 + a H1 is concave in a. Chords bound it from
# below and tangents (Hellmann-Feynman slopes) from above.
known = [(a,) + ground_data(H0, H1, a)[:2] for a in (-4.0, 0.0, 4.0)]
for q in (-3.0, 1.0, 2.5):
    lo, hi = energy_bounds(H0, H1, known, q)
    exact = np.linalg.eigvalsh(H0 + q * H1)[0]
    print(f"a = {q:4}: {lo:.4f} <= {exact:.4f} <= {hi:.4f}")
