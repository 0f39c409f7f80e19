"""Boundary sampling and polytope approximations of joint numerical ranges.

The joint numerical range ``L(F_1, ..., F_k)`` is the set of expectation
vectors ``(Tr rho F_1, ..., Tr rho F_k)`` over density matrices ``rho``. It is
convex, so it is fixed by its support function
``h(n) = lambda_max(sum_i n_i F_i)``, and the face exposed by ``n`` is the
image of the top eigenspace.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import (
    DimensionMismatch,
    InteriorPointInvalid,
    StrategyDimensionMismatch,
    UnboundedIntersection,
)
from .linalg import GAP_TOL, as_hermitian, compress, lambda_max_projector

DIRECTION_TOL = 1e-12
MERGE_TOL = 1e-9
DEFAULT_MAX_DEPTH = 2


@dataclass(frozen=True)
class ObservableSet:
    """Ordered tuple of same-dimension Hermitian operators."""

    operators: tuple
    labels: tuple = ()

    def __post_init__(self):
        ops = tuple(as_hermitian(F) for F in self.operators)
        if not ops:
            raise DimensionMismatch("an observable set needs at least one operator")
        d = ops[0].shape[0]
        for i, F in enumerate(ops):
            if F.shape[0] != d:
                raise DimensionMismatch(f"operator {i} has dim {F.shape[0]}, expected {d}")
        labels = tuple(self.labels) or tuple(f"F{i + 1}" for i in range(len(ops)))
        if len(labels) != len(ops):
            raise DimensionMismatch("one label per operator is required")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "labels", labels)

    @property
    def k(self):
        return len(self.operators)

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def __len__(self):
        return self.k

    def __getitem__(self, i):
        return self.operators[i]

    def combine(self, n):
        """``sum_i n_i F_i``."""
        n = np.asarray(n, dtype=float)
        if n.shape != (self.k,):
            raise DimensionMismatch(f"direction has shape {n.shape}, expected ({self.k},)")
        out = n[0] * self.operators[0]
        for c, F in zip(n[1:], self.operators[1:]):
            out = out + c * F
        return out

    def expectations(self, rho):
        rho = np.asarray(rho)
        return np.array([np.sum(rho * F.T).real for F in self.operators])

    def expectations_pure(self, psi):
        psi = np.asarray(psi)
        return np.array([np.vdot(psi, F @ psi).real for F in self.operators])

    def center(self):
        """Image of the maximally mixed state, ``(Tr F_i / d)_i``."""
        return np.array([np.trace(F).real / self.dim for F in self.operators])

    def compressed(self, basis):
        return ObservableSet(tuple(compress(F, basis) for F in self.operators), self.labels)


def as_observable_set(ops):
    if isinstance(ops, ObservableSet):
        return ops
    return ObservableSet(tuple(ops))


def unit_direction(n):
    n = np.asarray(n, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise ValueError("direction must be nonzero")
    return n / norm


@dataclass(frozen=True)
class BoundaryPoint:
    point: np.ndarray
    direction: np.ndarray
    support_value: float
    multiplicity: int
    depth: int = 0
    # The recursion budget ran out and the face centroid was emitted instead.
    truncated: bool = False


def support_function(obs, n, gap_tol=GAP_TOL):
    """Support value ``lambda_max(n . F)`` and the projector onto its eigenspace."""
    obs = as_observable_set(obs)
    top = lambda_max_projector(obs.combine(n), gap_tol)
    return top.eigenvalue, top


def boundary_sweep_2d(X, Y, num_angles, gap_tol=GAP_TOL):
    """Boundary of ``L(X, Y)`` on a uniform grid of ``num_angles`` angles.

    A nondegenerate direction contributes one point. A degenerate one
    contributes the two endpoints of the exposed segment, obtained from the
    extreme eigenvalues of the tangent operator compressed to the eigenspace,
    listed in counterclockwise order.
    """
    if num_angles < 3:
        raise ValueError("num_angles must be at least 3")
    obs = ObservableSet((X, Y))
    out = []
    for theta in 2 * np.pi * np.arange(num_angles) / num_angles:
        n = np.array([np.cos(theta), np.sin(theta)])
        value, top = support_function(obs, n, gap_tol)
        if top.multiplicity == 1:
            v = top.basis[:, 0]
            out.append(BoundaryPoint(obs.expectations_pure(v), n, value, 1))
            continue
        face = obs.compressed(top.basis)
        tangent = np.array([-n[1], n[0]])
        w, V = np.linalg.eigh(face.combine(tangent))
        for v in (V[:, 0], V[:, -1]):
            out.append(BoundaryPoint(face.expectations_pure(v), n, value, top.multiplicity))
    return out


def _complement_basis(normals, k):
    """Orthonormal basis (columns) of the complement of span(normals) in R^k."""
    if not normals:
        return np.eye(k)
    N = np.array(normals).T
    Q, _ = np.linalg.qr(N, mode="complete")
    return Q[:, len(normals):]


def _subspace_directions(T, count):
    """Unit directions inside the column span of ``T``."""
    m = T.shape[1]
    if m == 1:
        coeffs = np.array([[1.0], [-1.0]])
    elif m == 2:
        angles = 2 * np.pi * np.arange(count) / count
        coeffs = np.column_stack([np.cos(angles), np.sin(angles)])
    elif m == 3:
        coeffs = fibonacci_sphere(count)
    else:
        coeffs = sample_directions(m, count, "seeded_uniform", seed=0)
    return coeffs @ T.T


def _face_points(face, normals, count, depth, max_depth, gap_tol):
    """Boundary of the face ``L(face)`` using directions orthogonal to ``normals``.

    Returns a list of (point, depth, truncated).
    """
    T = _complement_basis(normals, face.k)
    if T.shape[1] == 0:
        return [(face.center(), depth, False)]
    out = []
    for u in _subspace_directions(T, count):
        _, top = support_function(face, u, gap_tol)
        if top.multiplicity == 1:
            out.append((face.expectations_pure(top.basis[:, 0]), depth, False))
        elif depth < max_depth:
            sub = face.compressed(top.basis)
            out.extend(_face_points(sub, normals + [u], count, depth + 1, max_depth, gap_tol))
        else:
            centroid = face.expectations(top.projector) / top.multiplicity
            out.append((centroid, depth, True))
    return out


def boundary_general(obs, directions, gap_tol=GAP_TOL, max_depth=DEFAULT_MAX_DEPTH,
                     sub_count=None, threads=1):
    """Boundary points of ``L(F_1, ..., F_k)`` for each direction.

    Degenerate faces are resolved by recursing on the operators compressed
    to the top eigenspace, sampling ``sub_count`` directions orthogonal to
    the normals already fixed (default: a quarter of ``len(directions)``,
    at least 8). Every emitted point carries the top-level direction it
    came from. When ``max_depth`` is exhausted the face centroid is emitted
    with ``truncated=True``.
    """
    obs = as_observable_set(obs)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.shape[1] != obs.k:
        raise DimensionMismatch(f"directions have {directions.shape[1]} components, expected {obs.k}")
    norms = np.linalg.norm(directions, axis=1)
    if np.any(np.abs(norms - 1) > DIRECTION_TOL):
        raise ValueError("directions must be unit vectors")
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if sub_count is None:
        sub_count = max(8, len(directions) // 4)

    def one(n):
        value, top = support_function(obs, n, gap_tol)
        if top.multiplicity == 1:
            return [BoundaryPoint(obs.expectations_pure(top.basis[:, 0]), n, value, 1)]
        face = obs.compressed(top.basis)
        pts = _face_points(face, [n], sub_count, 1, max_depth, gap_tol)
        return [BoundaryPoint(p, n, value, top.multiplicity, depth, trunc) for p, depth, trunc in pts]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(one, directions))
    else:
        chunks = [one(n) for n in directions]
    return [bp for chunk in chunks for bp in chunk]


def fibonacci_sphere(count):
    """``count`` nearly uniform points on the unit sphere (golden-angle spiral)."""
    j = np.arange(count)
    z = 1.0 - (2.0 * j + 1.0) / count
    r = np.sqrt(1.0 - z * z)
    phi = j * np.pi * (3.0 - np.sqrt(5.0))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def sample_directions(k, count, strategy="seeded_uniform", seed=0):
    """Deterministic unit directions in R^k, one per row."""
    if count < 1:
        raise ValueError("count must be positive")
    if strategy == "grid2d":
        if k != 2:
            raise StrategyDimensionMismatch(f"grid2d needs k=2, got k={k}")
        angles = 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if strategy == "fibonacci3d":
        if k != 3:
            raise StrategyDimensionMismatch(f"fibonacci3d needs k=3, got k={k}")
        return fibonacci_sphere(count)
    if strategy == "seeded_uniform":
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(count, k))
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    raise ValueError(f"unknown strategy {strategy!r}")


def default_strategy(k):
    return {2: "grid2d", 3: "fibonacci3d"}.get(k, "seeded_uniform")


@dataclass
class Polytope:
    """Vertices (rows) and facets ``normals @ x <= offsets``.

    ``affine_dim`` below the ambient dimension marks a flat hull; its
    equality constraints appear as pairs of opposite facets.
    """

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    affine_dim: int = field(default=-1)

    def __post_init__(self):
        if self.affine_dim < 0:
            self.affine_dim = self.vertices.shape[1]

    @property
    def degenerate(self):
        return self.affine_dim < self.vertices.shape[1]

    def violation(self, x):
        """Largest ``n . x - offset`` over facets (<= 0 means inside)."""
        x = np.atleast_2d(x)
        return np.max(x @ self.normals.T - self.offsets, axis=1)

    def contains(self, x, tol=MERGE_TOL):
        return self.violation(x) <= tol


def _merge_close(points, tol):
    """Indices of representatives after merging points closer than ``tol``."""
    if len(points) <= 1:
        return np.arange(len(points))
    tree = cKDTree(points)
    parent = np.arange(len(points))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in sorted(tree.query_pairs(tol)):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return np.array(sorted({find(i) for i in range(len(points))}))


def _unique_facets(normals, offsets, tol=1e-12):
    keys = np.round(np.column_stack([normals, offsets]) / tol) * tol
    _, idx = np.unique(keys, axis=0, return_index=True)
    idx = np.sort(idx)
    return normals[idx], offsets[idx]


def _hull_full(points):
    hull = ConvexHull(points)
    verts = points[hull.vertices]
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    normals, offsets = _unique_facets(normals, offsets)
    return verts, normals, offsets


def inner_polytope(points, merge_tol=MERGE_TOL):
    """Convex hull of sampled boundary points.

    Vertices are a subset of the input. A hull of lower affine dimension is
    computed inside its affine span and reported through ``affine_dim``.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    m, k = P.shape
    keep = _merge_close(P, merge_tol * (1.0 + np.max(np.abs(P))))
    P = P[keep]
    center = P.mean(axis=0)
    _, s, Vt = np.linalg.svd(P - center, full_matrices=True)
    scale = max(1.0, s[0] if len(s) else 1.0)
    r = int(np.sum(s > 1e-9 * scale))
    if r == k and k == 1:
        lo, hi = P[:, 0].min(), P[:, 0].max()
        return Polytope(np.array([[lo], [hi]]), np.array([[-1.0], [1.0]]), np.array([-lo, hi]), 1)
    if r == k:
        verts, normals, offsets = _hull_full(P)
        return Polytope(verts, normals, offsets, k)
    span, perp = Vt[:r].T, Vt[r:].T
    local = (P - center) @ span
    if r == 0:
        verts = P[:1]
        n_in, o_in = np.zeros((0, k)), np.zeros(0)
    elif r == 1:
        i_lo, i_hi = np.argmin(local[:, 0]), np.argmax(local[:, 0])
        verts = P[[i_lo, i_hi]]
        d = span[:, 0]
        n_in = np.array([-d, d])
        o_in = np.array([-(d @ P[i_lo]), d @ P[i_hi]])
    else:
        hull = ConvexHull(local)
        verts = P[hull.vertices]
        n_loc = hull.equations[:, :-1]
        n_in = n_loc @ span.T
        o_in = -hull.equations[:, -1] + n_in @ center
    n_eq = np.vstack([perp.T, -perp.T])
    o_eq = n_eq @ center
    normals, offsets = _unique_facets(np.vstack([n_in, n_eq]), np.concatenate([o_in, o_eq]))
    return Polytope(verts, normals, offsets, r)


def outer_polytope(normals, values, interior_point, merge_tol=MERGE_TOL):
    """Intersection of the halfspaces ``n_i . x <= h_i``.

    Vertices are enumerated by polar duality about ``interior_point``: the
    facets of the hull of ``n_i / (h_i - n_i . c)`` correspond to vertices of
    the intersection.
    """
    N = np.atleast_2d(np.asarray(normals, dtype=float))
    h = np.asarray(values, dtype=float).ravel()
    c = np.asarray(interior_point, dtype=float).ravel()
    m, k = N.shape
    if h.shape != (m,) or c.shape != (k,):
        raise DimensionMismatch("normals, values and interior point have inconsistent shapes")
    margin = h - N @ c
    if np.any(margin <= 1e-9):
        worst = int(np.argmin(margin))
        raise InteriorPointInvalid(
            f"interior point violates or touches halfspace {worst} (margin {margin[worst]:.3e})"
        )
    Q = N / margin[:, None]
    if k == 1:
        pos, neg = Q[:, 0] > 0, Q[:, 0] < 0
        if not pos.any() or not neg.any():
            raise UnboundedIntersection("directions do not positively span R^1")
        hi = c[0] + 1.0 / Q[pos, 0].max()
        lo = c[0] + 1.0 / Q[neg, 0].min()
        return Polytope(np.array([[lo], [hi]]), np.array([[-1.0], [1.0]]), np.array([-lo, hi]), 1)
    try:
        dual = ConvexHull(Q)
    except QhullError as exc:
        raise UnboundedIntersection(f"directions do not positively span R^{k}: {exc}") from None
    a = dual.equations[:, :-1]
    b = dual.equations[:, -1]
    # origin strictly inside the dual hull <=> bounded primal
    if np.any(b > -1e-12 * (1.0 + np.abs(a).sum(axis=1))):
        raise UnboundedIntersection(f"directions do not positively span R^{k}")
    verts = c - a / b[:, None]
    scale = 1.0 + np.max(np.abs(verts))
    verts = verts[_merge_close(verts, merge_tol * scale)]
    active = np.sort(dual.vertices)
    return Polytope(verts, N[active], h[active], k)


def support_data(obs, directions, gap_tol=GAP_TOL):
    """Support values for each direction row."""
    obs = as_observable_set(obs)
    return np.array([support_function(obs, n, gap_tol)[0] for n in directions])
