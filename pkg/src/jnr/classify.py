"""Flat parts of joint numerical range boundaries and qutrit classification.

A flat part is exposed by a direction ``n`` whose top eigenvalue of
``n . F`` is degenerate. Such directions form a measure-zero set, so they
are located by scanning a direction grid for local minima of the top gap
and then refining each candidate: with the top two-dimensional eigenspace
held fixed, the direction that makes the compressed operator scalar is the
null vector of the Gram matrix of the compressed Bloch vectors. Iterating
this converges to the exactly degenerate direction.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .boundary import (
    ObservableSet,
    as_observable_set,
    boundary_general,
    fibonacci_sphere,
    sample_directions,
)
from .errors import NotAFlatPart, WrongDimension
from .linalg import GAP_TOL, check_orthonormal, compress, lambda_max_projector

SEGMENT_RANK_TOL = 1e-7
DEDUP_TOL = 1e-7
COMMUTE_TOL = 1e-10

K2_ANGLES = 2048
K3_DIRECTIONS = 8192
MAX_CANDIDATES = 64

K2_LABELS = ("oval_class0", "one_flat_class1", "two_segments_class2", "triangle_class3")

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass
class FlatPart:
    """A positive-dimensional exposed face.

    ``axes`` holds the semi-axis vectors as columns: one column for a
    segment (half its length), two for an ellipse. Points of the face are
    ``center + axes @ r`` with ``|r| <= 1``.
    """

    kind: str
    center: np.ndarray
    axes: np.ndarray
    direction: np.ndarray = None
    multiplicity: int = 2

    @property
    def endpoints(self):
        if self.kind != "segment":
            raise AttributeError("only segments have endpoints")
        a = self.axes[:, 0]
        return np.array([self.center - a, self.center + a])

    @property
    def semi_axes(self):
        return np.linalg.norm(self.axes, axis=0)

    def sample(self, count=64):
        if self.kind == "segment":
            t = np.linspace(-1, 1, max(count, 2))
            return self.center + np.outer(t, self.axes[:, 0])
        phi = 2 * np.pi * np.arange(count) / count
        return self.center + np.column_stack([np.cos(phi), np.sin(phi)]) @ self.axes.T

    def to_dict(self):
        out = {
            "kind": self.kind,
            "carrier": {"point": self.center.tolist(), "span": self.axes.T.tolist()},
            "direction": None if self.direction is None else self.direction.tolist(),
        }
        if self.kind == "segment":
            out["extent"] = {"endpoints": self.endpoints.tolist()}
        else:
            out["extent"] = {"center": self.center.tolist(), "semi_axes": self.semi_axes.tolist()}
        return out


def bloch_coefficients(C):
    """``(c0, c)`` with ``C = c0 I + c . sigma`` for a 2x2 Hermitian ``C``."""
    c0 = np.trace(C).real / 2
    c = np.array([np.trace(C @ S).real / 2 for S in (_SX, _SY, _SZ)])
    return c0, c


def _spectral_widths(obs):
    w = []
    for F in obs.operators:
        ev = np.linalg.eigvalsh(F)
        w.append(ev[-1] - ev[0])
    w = np.array(w)
    return np.where(w > 0, w, 1.0)


def ellipse_from_eigenspace(obs, basis, direction=None):
    """Image of the Bloch ball of a 2-dimensional subspace.

    The map from Bloch vectors to expectation vectors is affine; its linear
    part decides the shape: rank 2 is an ellipse, rank 1 a segment. Rank 3
    (a solid ellipsoid) and rank 0 (a point) cannot be flat parts.
    """
    obs = as_observable_set(obs)
    basis = check_orthonormal(basis)
    if basis.shape[1] != 2:
        raise ValueError("basis must have exactly two columns")
    center, rows = [], []
    for F in obs.operators:
        c0, c = bloch_coefficients(compress(F, basis))
        center.append(c0)
        rows.append(c)
    center, L = np.array(center), np.array(rows)
    widths = _spectral_widths(obs)
    U, s, Vt = np.linalg.svd(L / widths[:, None])
    rank = int(np.sum(s > SEGMENT_RANK_TOL))
    if rank == 0:
        raise NotAFlatPart("the subspace maps to a single point")
    if rank == 3:
        raise NotAFlatPart("the Bloch ball maps onto a solid ellipsoid")
    # semi-axis vectors in original coordinates
    axes = (widths[:, None] * U[:, :rank]) * s[:rank]
    kind = "segment" if rank == 1 else "ellipse"
    return FlatPart(kind, center, axes, None if direction is None else np.asarray(direction, float))


def _region_from_eigenspace(obs, basis, direction):
    """Flat part for an eigenspace of dimension three or more."""
    face = obs.compressed(basis)
    pts = np.array([bp.point for bp in boundary_general(face, _local_directions(obs.k))])
    center = pts.mean(axis=0)
    widths = _spectral_widths(obs)
    _, s, _ = np.linalg.svd((pts - center) / widths)
    rank = int(np.sum(s / np.sqrt(len(pts)) > SEGMENT_RANK_TOL))
    if rank == 0:
        return None
    Vt = np.linalg.svd(pts - center)[2]
    if rank == 1:
        axis = Vt[0]
        proj = (pts - center) @ axis
        lo, hi = proj.min(), proj.max()
        mid = center + axis * (lo + hi) / 2
        return FlatPart("segment", mid, (axis * (hi - lo) / 2)[:, None], direction, basis.shape[1])
    # bounding semi-axes along the principal directions of the sampled face
    axes = Vt[:rank].T * np.abs((pts - center) @ Vt[:rank].T).max(axis=0)
    return FlatPart("region", center, axes, direction, basis.shape[1])


def _local_directions(k):
    if k == 2:
        return sample_directions(2, 64, "grid2d")
    if k == 3:
        return fibonacci_sphere(256)
    return sample_directions(k, 256, "seeded_uniform", seed=0)


def top_gaps(obs, directions):
    """Normalized gap between the two largest eigenvalues for each direction."""
    stack = np.array(obs.operators)
    mats = np.einsum("nk,kij->nij", directions, stack)
    w = np.linalg.eigvalsh(mats)
    return (w[:, -1] - w[:, -2]) / (1.0 + w[:, -1] - w[:, 0])


def _bloch_rows(stack, B):
    """Bloch vectors of each operator compressed onto the columns of ``B``."""
    C = np.einsum("ai,kab,bj->kij", B.conj(), stack, B)
    return np.column_stack([
        C[:, 0, 1].real,
        -C[:, 0, 1].imag,
        (C[:, 0, 0].real - C[:, 1, 1].real) / 2,
    ])


def refine_degenerate_direction(obs, n, max_iter=100):
    """Fixed-point iteration toward a direction with degenerate top eigenvalue.

    Returns ``(direction, normalized gap)``.
    """
    obs = as_observable_set(obs)
    stack = np.array(obs.operators)
    n = np.asarray(n, dtype=float) / np.linalg.norm(n)
    for _ in range(max_iter):
        _, V = np.linalg.eigh(np.tensordot(n, stack, axes=1))
        L = _bloch_rows(stack, V[:, -2:])
        _, vecs = np.linalg.eigh(L @ L.T)
        n_new = vecs[:, 0]
        if n_new @ n < 0:
            n_new = -n_new
        step = np.linalg.norm(n_new - n)
        n = n_new
        if step < 1e-14:
            break
    w = np.linalg.eigvalsh(np.tensordot(n, stack, axes=1))
    return n, (w[-1] - w[-2]) / (1.0 + w[-1] - w[0])


def _grid_for(k, count):
    if k == 2:
        return sample_directions(2, count or K2_ANGLES, "grid2d")
    if k == 3:
        return fibonacci_sphere(count or K3_DIRECTIONS)
    return sample_directions(k, count or 4096, "seeded_uniform", seed=0)


def _candidates(directions, gaps, k):
    m = len(directions)
    # ties are broken toward the lower index so plateaus yield one candidate
    if k == 2:
        left, right = np.roll(gaps, 1), np.roll(gaps, -1)
        idx = np.flatnonzero((gaps < left) & (gaps <= right))
    else:
        nb = min(m, 2 * k + 3)
        _, nbr = cKDTree(directions).query(directions, nb)
        own = np.arange(m)[:, None]
        g, gn = gaps[:, None], gaps[nbr[:, 1:]]
        better = (gn < g) | ((gn == g) & (nbr[:, 1:] < own))
        idx = np.flatnonzero(~better.any(axis=1))
    idx = idx[np.argsort(gaps[idx], kind="stable")]
    return idx[:MAX_CANDIDATES]


def _hausdorff(a, b):
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return max(d.min(axis=1).max(), d.min(axis=0).max())


def detect_flat_parts(obs, directions=None, gap_tol=GAP_TOL):
    """Flat parts of the boundary of ``L(F_1, ..., F_k)``.

    ``directions`` is the scan grid (rows); by default 2048 angles for k=2
    and 8192 Fibonacci directions for k=3. Detection is sampling based and
    only exhaustive in practice for small dimensions.
    """
    obs = as_observable_set(obs)
    if obs.dim < 2:
        return []
    D = _grid_for(obs.k, None) if directions is None else np.atleast_2d(np.asarray(directions, float))
    gaps = top_gaps(obs, D)
    starts = list(np.flatnonzero(gaps <= gap_tol)[:MAX_CANDIDATES])
    starts += [i for i in _candidates(D, gaps, obs.k) if i not in starts]
    scale = 1.0 + max(np.max(np.abs(F)) for F in obs.operators)
    parts, samples, seen = [], [], []
    for i in starts:
        n, g = refine_degenerate_direction(obs, D[i])
        if g > gap_tol:
            continue
        if any(np.linalg.norm(n - m) < 1e-9 for m in seen):
            continue
        seen.append(n)
        top = lambda_max_projector(obs.combine(n), gap_tol)
        if top.multiplicity < 2:
            continue
        if top.multiplicity == 2:
            try:
                part = ellipse_from_eigenspace(obs, top.basis, n)
            except NotAFlatPart:
                continue
        else:
            part = _region_from_eigenspace(obs, top.basis, n)
            if part is None:
                continue
        pts = part.sample(64)
        if any(_hausdorff(pts, s) < DEDUP_TOL * scale for s in samples):
            continue
        parts.append(part)
        samples.append(pts)
    return parts


def operators_commute(obs, tol=COMMUTE_TOL):
    ops = as_observable_set(obs).operators
    scale = 1.0 + max(np.max(np.abs(F)) for F in ops)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if np.max(np.abs(ops[i] @ ops[j] - ops[j] @ ops[i])) > tol * scale**2:
                return False
    return True


@dataclass
class JnrClass:
    k: int
    label: str = None
    e: int = None
    s: int = None
    infinite_segments: bool = False
    flat_parts: list = field(default_factory=list)

    @property
    def index(self):
        """Class number 0..3 for two operators."""
        return K2_LABELS.index(self.label) if self.label in K2_LABELS else None

    def to_dict(self):
        return {
            "k": self.k,
            "class": self.label if self.k == 2 or self.label else f"e={self.e},s={self.s}",
            "index": self.index,
            "e": self.e,
            "s": self.s,
            "infinite_segments": self.infinite_segments,
            "flat_parts": [p.to_dict() for p in self.flat_parts],
            "intersections": flat_part_intersections(self.flat_parts),
        }


def flat_part_intersections(parts, tol=1e-7):
    """Number of pairs of flat parts that touch."""
    count = 0
    samples = [p.sample(256) for p in parts]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            d = np.linalg.norm(samples[i][:, None, :] - samples[j][None, :, :], axis=2).min()
            scale = 1.0 + np.max(np.abs(samples[i]))
            # sampled curves: allow the sampling pitch
            pitch = max(np.max(parts[i].semi_axes), np.max(parts[j].semi_axes)) * 2 * np.pi / 256
            if d <= tol * scale + pitch:
                count += 1
    return count


def classify_k2_qutrit(X, Y, gap_tol=GAP_TOL):
    """Class of ``L(X, Y)`` for 3x3 operators, by its number of segments."""
    obs = ObservableSet((X, Y))
    if obs.dim != 3:
        raise WrongDimension(f"qutrit classification needs d=3, got d={obs.dim}")
    if operators_commute(obs):
        return JnrClass(2, label="triangle_class3", s=3)
    parts = [p for p in detect_flat_parts(obs, gap_tol=gap_tol) if p.kind == "segment"]
    s = len(parts)
    if s > 2:
        raise RuntimeError(f"found {s} segments for a noncommuting qutrit pair")
    return JnrClass(2, label=K2_LABELS[s], s=s, flat_parts=parts)


def classify_k3_qutrit(F1, F2, F3, gap_tol=GAP_TOL):
    """``(e, s)`` configuration of ``L(F1, F2, F3)`` for 3x3 operators."""
    obs = ObservableSet((F1, F2, F3))
    if obs.dim != 3:
        raise WrongDimension(f"qutrit classification needs d=3, got d={obs.dim}")
    if operators_commute(obs):
        return JnrClass(3, label="polytope_degenerate")
    parts = detect_flat_parts(obs, gap_tol=gap_tol)
    e = sum(p.kind == "ellipse" for p in parts)
    segs = sum(p.kind == "segment" for p in parts)
    infinite = segs >= 2
    s = min(segs, 1)
    if e >= 3 and s >= 1:
        raise RuntimeError(f"inconsistent detection: e={e} with a segment")
    return JnrClass(3, e=e, s=s, infinite_segments=infinite, flat_parts=parts)
