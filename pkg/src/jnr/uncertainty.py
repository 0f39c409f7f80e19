"""Two-sided bounds for variance-based uncertainty relations.

Variances are read off the joint numerical range of the lifted operators
``(F_1, F_1^2, ..., F_k, F_k^2)``. For the sum of two variances it is enough
to use ``L(X, Y, X^2 + Y^2)``, on which the sum of variances is the concave
function ``u(x, y, z) = z - x^2 - y^2``. A concave function attains its
minimum over a polytope at a vertex, which gives

* an upper bound on the true minimum from the vertices of the inner polytope
  (the hull of attained boundary points, a subset of the range), and
* a lower bound from the vertices of the outer polytope (the intersection
  of supporting halfspaces, a superset).

By default the direction budget is spent adaptively: half on a uniform
Fibonacci set, the rest on cuts through the outer vertices with the
smallest ``u``, which tightens both sides where the minimum lives.
"""

from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    ObservableSet,
    boundary_general,
    fibonacci_sphere,
    inner_polytope,
    outer_polytope,
    sample_directions,
)
from .errors import DimensionMismatch, InvalidMomentPair
from .linalg import GAP_TOL, as_hermitian

INVALID_TOL = 1e-6
CUT_BATCH = 8
# added to either side of a bracket to cover floating-point error
ROUNDING_MARGIN = 1e-12

SUM = "sum_of_variances"
PRODUCT = "product_of_variances"


def variance_map(point):
    """Map ``(f_1, f'_1, ..., f_k, f'_k)`` to ``(f'_1 - f_1^2, ..., f'_k - f_k^2)``.

    Small negative slack from rounding is clamped to zero.
    """
    p = np.asarray(point, dtype=float).ravel()
    if p.size % 2:
        raise DimensionMismatch("expected an even number of moments")
    f, f2 = p[0::2], p[1::2]
    var = f2 - f * f
    if np.any(var < -INVALID_TOL):
        i = int(np.argmin(var))
        raise InvalidMomentPair(f"pair {i}: second moment {f2[i]} below squared mean {f[i] ** 2}")
    return np.where(var < 0, 0.0, var)


@dataclass
class UncertaintyProblem:
    observables: tuple
    function_kind: str
    lifted_set: ObservableSet
    # per-observable shifts removed before lifting (variances are shift invariant)
    shifts: np.ndarray = field(default=None)

    @property
    def k(self):
        return len(self.observables)


def uncertainty_lifted(observables, kind=SUM, center=False):
    """Lifted observable set for an uncertainty function.

    Two observables with ``kind="sum_of_variances"`` give the reduced triple
    ``(X, Y, X^2 + Y^2)``; otherwise the full ``(F_1, F_1^2, ..., F_k, F_k^2)``.
    With ``center=True`` each operator is first shifted to zero trace.
    """
    ops = tuple(as_hermitian(F) for F in observables)
    if not ops:
        raise ValueError("at least one observable is required")
    d = ops[0].shape[0]
    if any(F.shape[0] != d for F in ops):
        raise DimensionMismatch("observables must share one dimension")
    if kind not in (SUM, PRODUCT):
        raise ValueError(f"unknown function kind {kind!r}")
    shifts = np.array([np.trace(F).real / d for F in ops]) if center else np.zeros(len(ops))
    work = tuple(F - s * np.eye(d) for F, s in zip(ops, shifts))
    if kind == SUM and len(work) == 2:
        X, Y = work
        lifted = ObservableSet((X, Y, X @ X + Y @ Y), ("X", "Y", "X2+Y2"))
    else:
        lifted_ops, labels = [], []
        for i, F in enumerate(work):
            lifted_ops += [F, F @ F]
            labels += [f"F{i + 1}", f"F{i + 1}^2"]
        lifted = ObservableSet(tuple(lifted_ops), tuple(labels))
    return UncertaintyProblem(ops, kind, lifted, shifts)


def _sum_reduced(p):
    p = np.atleast_2d(p)
    return p[:, 2] - p[:, 0] ** 2 - p[:, 1] ** 2


def uncertainty_value(problem, points):
    """Uncertainty function evaluated on lifted points (rows)."""
    P = np.atleast_2d(points)
    if problem.function_kind == SUM and problem.k == 2:
        return _sum_reduced(P)
    V = np.array([variance_map(p) for p in P])
    return V.sum(axis=1) if problem.function_kind == SUM else V.prod(axis=1)


@dataclass
class BoundBracket:
    lower: float
    upper: float
    num_directions: int
    argmin_point: np.ndarray
    argmin_side: str = "inner_vertices"
    outer_argmin_point: np.ndarray = None
    argmin_state: np.ndarray = field(default=None, repr=False)
    directions: np.ndarray = field(default=None, repr=False)

    @property
    def width(self):
        return self.upper - self.lower


class _SupportCache:
    """Boundary evaluations accumulated over refinement rounds."""

    def __init__(self, obs, gap_tol):
        self.obs = obs
        self.gap_tol = gap_tol
        self.directions = np.zeros((0, obs.k))
        self.values = np.zeros(0)
        self.points = []

    def add(self, D):
        D = np.atleast_2d(D)
        for n in D:
            bps = boundary_general(self.obs, n[None, :], self.gap_tol)
            self.values = np.append(self.values, bps[0].support_value)
            for bp in bps:
                self.points.append(bp.point)
        self.directions = np.vstack([self.directions, D])

    def state_for(self, point):
        """A unit vector whose expectation vector is ``point``, if one was produced."""
        obs = self.obs
        for n in self.directions:
            w, V = np.linalg.eigh(obs.combine(n))
            v = V[:, -1]
            if np.linalg.norm(obs.expectations_pure(v) - point) < 1e-9:
                return v
        return None


def _bracket_from_cache(cache, value_fn, center):
    P = np.array(cache.points)
    inner = inner_polytope(P)
    outer = outer_polytope(cache.directions, cache.values, center)
    u_in = value_fn(inner.vertices)
    u_out = value_fn(outer.vertices)
    i_in, i_out = int(np.argmin(u_in)), int(np.argmin(u_out))
    return u_in[i_in], inner.vertices[i_in], u_out[i_out], outer.vertices[i_out], outer


def _cut_directions(outer, value_fn, D, h, center, batch):
    """Directions cutting off the outer vertices with the smallest values."""
    V = outer.vertices
    order = np.argsort(value_fn(V), kind="stable")
    out = []
    k = D.shape[1]
    for i in order:
        if len(out) == batch:
            break
        v = V[i]
        slack = h - D @ v
        tol = 1e-9 * (1.0 + np.abs(h))
        active = np.flatnonzero(slack <= tol)
        if len(active) < k:
            active = np.argsort(slack, kind="stable")[:k]
        n = D[active].sum(axis=0)
        norm = np.linalg.norm(n)
        if norm < 1e-12:
            n = v - center
            norm = np.linalg.norm(n)
        n = n / norm
        if np.min(np.linalg.norm(D - n, axis=1)) < 1e-12:
            continue
        if any(np.linalg.norm(n - m) < 1e-12 for m in out):
            continue
        out.append(n)
    return np.array(out).reshape(-1, k)


def bracket_from_directions(problem, directions, gap_tol=GAP_TOL):
    """Bracket for a fixed direction set, without refinement."""
    return _run(problem, np.asarray(directions, float), 0, gap_tol)


def _run(problem, initial, extra, gap_tol):
    obs = problem.lifted_set
    if obs.k > 3:
        raise DimensionMismatch("polytope brackets need a lifted set of dimension at most 3")
    value_fn = lambda P: uncertainty_value(problem, P)
    center = obs.center()
    cache = _SupportCache(obs, gap_tol)
    cache.add(initial)
    budget = len(initial) + extra
    while len(cache.directions) < budget:
        _, _, _, _, outer = _bracket_from_cache(cache, value_fn, center)
        batch = min(CUT_BATCH, budget - len(cache.directions))
        new = _cut_directions(outer, value_fn, cache.directions, cache.values, center, batch)
        if len(new) == 0:
            break
        cache.add(new)
    u_in, p_in, u_out, p_out, _ = _bracket_from_cache(cache, value_fn, center)
    scale = 1.0 + np.max(np.abs(np.array(cache.points))) ** 2
    margin = ROUNDING_MARGIN * scale
    return BoundBracket(
        lower=float(u_out - margin),
        upper=float(u_in + margin),
        num_directions=len(cache.directions),
        argmin_point=_unshift(problem, p_in),
        outer_argmin_point=_unshift(problem, p_out),
        argmin_state=cache.state_for(p_in),
        directions=cache.directions,
    )


def _unshift(problem, p):
    """Map a lifted point of the centered problem back to original moments."""
    s = problem.shifts
    if s is None or not np.any(s):
        return np.array(p, dtype=float)
    p = np.array(p, dtype=float)
    if problem.function_kind == SUM and problem.k == 2:
        x, y, z = p
        return np.array([x + s[0], y + s[1], z + 2 * s[0] * x + s[0] ** 2 + 2 * s[1] * y + s[1] ** 2])
    out = p.copy()
    out[0::2] = p[0::2] + s
    out[1::2] = p[1::2] + 2 * s * p[0::2] + s ** 2
    return out


def maccone_pati_bounds(X, Y, num_directions=1082, gap_tol=GAP_TOL, seed=0, refine="adaptive"):
    """Bracket ``[lower, upper]`` on ``min (Var X + Var Y)`` over all states.

    ``refine="adaptive"`` spends half of ``num_directions`` on a Fibonacci
    set and the rest on cuts near the minimizer; ``"uniform"`` uses one
    Fibonacci set (rotated by a seeded random rotation when ``seed`` is
    nonzero).
    """
    if num_directions < 50:
        raise ValueError("num_directions must be at least 50")
    problem = uncertainty_lifted((X, Y), SUM, center=True)
    if refine == "adaptive":
        n0 = num_directions // 2
    elif refine == "uniform":
        n0 = num_directions
    else:
        raise ValueError(f"unknown refine mode {refine!r}")
    initial = fibonacci_sphere(n0)
    if seed:
        initial = initial @ _random_rotation(seed).T
    return _run(problem, initial, num_directions - n0, gap_tol)


def _random_rotation(seed):
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.normal(size=(3, 3)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def sampled_bounds(problem, num_directions=4096, gap_tol=GAP_TOL, seed=0):
    """Bracket for lifted sets without vertex enumeration.

    The upper bound is the smallest value over attained boundary points.
    The lower bound is zero, which holds for every variance-based function
    used here because variances are nonnegative.
    """
    obs = problem.lifted_set
    D = sample_directions(obs.k, num_directions, "seeded_uniform", seed=seed)
    bps = boundary_general(obs, D, gap_tol)
    P = np.array([bp.point for bp in bps])
    vals = uncertainty_value(problem, P)
    i = int(np.argmin(vals))
    return BoundBracket(
        lower=0.0,
        upper=float(vals[i]),
        num_directions=len(D),
        argmin_point=_unshift(problem, P[i]),
        argmin_side="inner_vertices",
        directions=D,
    )


def uncertainty_bounds(problem, num_directions=1082, gap_tol=GAP_TOL, seed=0):
    """Bracket for any lifted problem, choosing the polytope route when possible."""
    if problem.function_kind == SUM and problem.k == 2:
        X, Y = problem.observables
        return maccone_pati_bounds(X, Y, num_directions, gap_tol, seed)
    if problem.lifted_set.k <= 3:
        initial = fibonacci_sphere(num_directions // 2) if problem.lifted_set.k == 3 else \
            sample_directions(problem.lifted_set.k, num_directions // 2, "grid2d")
        return _run(problem, initial, num_directions - len(initial), gap_tol)
    return sampled_bounds(problem, num_directions, gap_tol, seed)


def min_uncertainty_point(problem, bracket):
    """Variances at the bracket's minimizing point, and their sum or product.

    Uses the stored minimizing state when available so that individual
    variances can be recovered from the reduced sum problem.
    """
    psi = bracket.argmin_state
    if psi is not None:
        var = np.array([
            max(0.0, np.vdot(psi, F @ F @ psi).real - np.vdot(psi, F @ psi).real ** 2)
            for F in problem.observables
        ])
    elif not (problem.function_kind == SUM and problem.k == 2):
        var = variance_map(bracket.argmin_point)
    else:
        return None, float(_sum_reduced(bracket.argmin_point)[0])
    total = float(var.sum() if problem.function_kind == SUM else var.prod())
    return var, total
