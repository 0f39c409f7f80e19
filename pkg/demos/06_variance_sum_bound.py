"""Bracketing the minimal sum of variances Var X + Var Y.

On L(X, Y, X^2 + Y^2) the variance sum is z - x^2 - y^2, a concave
function. Its minimum over the inner polytope (hull of attained points)
is an upper bound on the true minimum; over the outer polytope (the
supporting halfspaces) it is a lower bound.
"""

import time

import numpy as np

from jnr import maccone_pati_bounds, min_uncertainty_point, uncertainty_lifted

X = np.array([[0, 1, 0], [1, 0, 1j], [0, -1j, 0]])
Y = np.diag([1.0, 0.0, -1.0])

for mode in ("uniform", "adaptive"):
    t0 = time.perf_counter()
    b = maccone_pati_bounds(X, Y, 1082, refine=mode)
    print(f"{mode:>8}: [{b.lower:.10f}, {b.upper:.10f}] width {b.width:.1e} ({time.perf_counter() - t0:.1f} s)")
print("exact value 15/32 =", 15 / 32)

var, total = min_uncertainty_point(uncertainty_lifted((X, Y)), b)
print("variances at the minimizer:", var.round(8), "sum", round(total, 10))

# %% Operators sharing an eigenvector admit a zero-variance state.
X0 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
b0 = maccone_pati_bounds(X0, Y, 200)
print("\nshared eigenvector: upper bound", b0.upper, "at", b0.argmin_point.round(12))
