"""The ten acceptance criteria, one test each, at their stated tolerances."""

import math
import time

import numpy as np

from jnr.boundary import ObservableSet, boundary_general, inner_polytope, outer_polytope, sample_directions, support_data
from jnr.classify import classify_k2_qutrit, classify_k3_qutrit, detect_flat_parts
from jnr.cli import main
from jnr.linalg import PAULI_Z, random_density, random_hermitian
from jnr.models import ising_observables
from jnr.phase import detect_ground_crossings, energy_bounds, ground_data, ground_energy, spectrum_sweep
from jnr.separable import bell_witness_pair, min_product_expectation
from jnr.thermal import thermal_point
from jnr.uncertainty import maccone_pati_bounds, min_uncertainty_point, uncertainty_lifted

from conftest import (
    CUSP_H0, CUSP_H1, FLAT_H0, FLAT_H1, MP_BOUND, MP_X, MP_Y, TRIVIAL_X, TRIVIAL_Y, record,
)


def test_01_variance_sum_benchmark():
    t0 = time.perf_counter()
    b = maccone_pati_bounds(MP_X, MP_Y, num_directions=1082)
    elapsed = time.perf_counter() - t0
    ok = b.lower <= MP_BOUND <= b.upper and b.width <= 3e-3 and elapsed <= 30
    record(1, ok, f"bracket [{b.lower:.12f}, {b.upper:.12f}] width {b.width:.2e}, {elapsed:.1f} s")
    assert ok


def test_02_trivial_bound():
    b = maccone_pati_bounds(TRIVIAL_X, TRIVIAL_Y, num_directions=1082)
    var, _ = min_uncertainty_point(uncertainty_lifted((TRIVIAL_X, TRIVIAL_Y)), b)
    image = np.array([0.0, -1.0, 1.0])
    ok = b.upper <= 1e-9 and np.allclose(b.argmin_point, image, atol=1e-9) and np.allclose(var, 0, atol=1e-9)
    record(2, ok, f"upper {b.upper:.2e}, argmin {np.round(b.argmin_point, 12).tolist()}, variances {var.tolist()}")
    assert ok


def test_03_flat_face():
    parts = detect_flat_parts(ObservableSet((FLAT_H0, FLAT_H1)))
    ok = len(parts) == 1 and parts[0].kind == "segment"
    err = float("nan")
    if ok:
        ends = np.array(sorted(parts[0].endpoints.tolist(), key=lambda p: p[1]))
        err = np.max(np.abs(ends - [[0, -1], [0, 1]]))
        ok = err <= 1e-8
    record(3, ok, f"{len(parts)} flat part(s), endpoint error {err:.1e}")
    assert ok


def test_04_crossing_locus():
    rep = detect_ground_crossings(spectrum_sweep(CUSP_H0, CUSP_H1, 720))
    # report angles in (-pi, pi]
    thetas = sorted(math.remainder(c.theta, 2 * math.pi) for c in rep.crossings)
    ok = len(thetas) == 2 and np.allclose(thetas, [-math.pi / 3, math.pi / 3], atol=1e-6)
    record(4, ok, f"crossings at {[round(t, 10) for t in thetas]} (expected +-pi/3 = +-{math.pi / 3:.10f})")
    assert ok


def test_05_classification():
    commuting = classify_k2_qutrit(np.diag([1.0, 0, -1]), np.diag([0.0, 1, -1])).index
    cusp = classify_k2_qutrit(CUSP_H0, CUSP_H1).index
    flat = classify_k2_qutrit(FLAT_H0, FLAT_H1).index
    k3 = classify_k3_qutrit(MP_X, MP_Y, MP_X @ MP_X + MP_Y @ MP_Y)
    ok = (commuting, cusp, flat) == (3, 2, 1) and (k3.e, k3.s) == (2, 0)
    record(5, ok, f"k=2 classes {commuting},{cusp},{flat}; k=3 (e, s) = ({k3.e}, {k3.s})")
    assert ok


def test_06_witness_separation():
    X, _ = bell_witness_pair(np.eye(2))
    lam = np.linalg.eigvalsh(X)[0]
    sep = min_product_expectation(X, (2, 2), restarts=20).value
    ok = abs(lam + 0.5) <= 1e-10 and abs(sep) <= 1e-6
    record(6, ok, f"lambda_min {lam:.12f}, product-state minimum {sep:.2e}")
    assert ok


def test_07_thermal_limits():
    obs = ObservableSet((PAULI_Z,))
    betas = [0.0, 0.01, 0.5, 1.0, 3.0, 10.0, 40.0]
    err_tanh = max(abs(thermal_point(obs, [1.0], b).point[0] + math.tanh(b)) for b in betas)
    pair = ObservableSet((CUSP_H0, CUSP_H1))
    zero_exact = all(np.array_equal(thermal_point(pair, n, 0.0).point, pair.center())
                     for n in sample_directions(2, 16, "grid2d"))
    err_inf = 0.0
    for n in sample_directions(2, 180, "grid2d"):
        w = np.linalg.eigvalsh(pair.combine(n))
        if w[1] - w[0] < 1e-6:
            continue
        tp = thermal_point(pair, n, math.inf)
        bp = boundary_general(pair, [-n])[0]
        err_inf = max(err_inf, np.max(np.abs(tp.point - bp.point)))
    ok = err_tanh <= 1e-12 and zero_exact and err_inf <= 1e-9
    record(7, ok, f"tanh error {err_tanh:.1e}, beta=0 exact {zero_exact}, beta=inf error {err_inf:.1e}")
    assert ok


def test_08_concavity_suite():
    rng = np.random.default_rng(8)
    worst_mid, worst_sandwich, worst_hf = np.inf, np.inf, 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        H0, H1 = random_hermitian(d, rng), random_hermitian(d, rng)
        a, b = np.sort(rng.uniform(-3, 3, 2))
        E = lambda x: ground_energy(H0, H1, x)
        worst_mid = min(worst_mid, E((a + b) / 2) - (E(a) + E(b)) / 2)
        known = [(x,) + ground_data(H0, H1, x)[:2] for x in np.linspace(-3, 3, 7)]
        for q in rng.uniform(-3, 3, 10):
            lo, hi = energy_bounds(H0, H1, known, q)
            worst_sandwich = min(worst_sandwich, E(q) - lo, hi - E(q))
        x, h = rng.uniform(-2, 2), 1e-5
        _, dE, gap = ground_data(H0, H1, x)
        if dE is not None and gap > 1e-2:
            fd = (E(x + h) - E(x - h)) / (2 * h)
            worst_hf = max(worst_hf, abs(fd - dE))
    ok = worst_mid >= -1e-10 and worst_sandwich >= -1e-10 and worst_hf <= 1e-6
    record(8, ok, f"midpoint slack {worst_mid:.1e}, sandwich slack {worst_sandwich:.1e}, derivative error {worst_hf:.1e}")
    assert ok


def test_09_geometry_suite():
    rng = np.random.default_rng(9)
    D = sample_directions(3, 500, "fibonacci3d")
    worst_nest = worst_member = worst_support = -np.inf
    for _ in range(20):
        d = int(rng.integers(2, 6))
        obs = ObservableSet(tuple(random_hermitian(d, rng) for _ in range(3)))
        pts = boundary_general(obs, D)
        h = support_data(obs, D)
        outer = outer_polytope(D, h, obs.center())
        inner = inner_polytope([bp.point for bp in pts])
        worst_nest = max(worst_nest, outer.violation(inner.vertices).max())
        E = np.array([obs.expectations(random_density(d, rng, rank=int(rng.integers(1, d + 1)))) for _ in range(100)])
        worst_member = max(worst_member, outer.violation(E).max())
        for bp in pts:
            lam = np.linalg.eigvalsh(obs.combine(bp.direction))[-1]
            worst_support = max(worst_support, abs(bp.direction @ bp.point - lam) / (1 + abs(lam)))
    ok = worst_nest <= 1e-9 and worst_member <= 1e-9 and worst_support <= 1e-9
    record(9, ok, f"nesting {worst_nest:.1e}, membership {worst_member:.1e}, support {worst_support:.1e}")
    assert ok


def test_10_ising_sanity(tmp_path):
    tops = [float(np.linalg.eigvalsh(ising_observables(N).operators[0])[-1]) for N in range(2, 9)]
    exact = all(t == 1.0 for t in tops)
    t0 = time.perf_counter()
    prefix = str(tmp_path / "ising6_")
    rc1 = main(["hamiltonian", "--model", "ising", "--sites", "6", "--out-prefix", prefix])
    ops = ",".join(f"{prefix}H{i}.json" for i in (1, 2, 3))
    out = tmp_path / "points.csv"
    rc2 = main(["boundary", "--ops", ops, "--directions", "500", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    rows = len(out.read_text().splitlines()) - 1 if out.exists() else 0
    ok = exact and rc1 == 0 and rc2 == 0 and rows >= 500 and elapsed <= 60
    record(10, ok, f"lambda_max(H1) = {tops}, pipeline {elapsed:.1f} s, {rows} rows")
    assert ok
