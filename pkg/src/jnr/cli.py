"""Command-line front end: ``jnr <subcommand> ...``.

Outputs go to ``--out`` (written atomically) or to stdout. Module errors
exit with status 1 and a JSON diagnostic on stderr; bad arguments or
unreadable paths exit with status 2.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import boundary, classify, models, phase, separable, thermal, uncertainty
from .errors import JnrError
from .io import atomic_write, csv_text, parse_operator_file, write_operator_file
from .linalg import GAP_TOL

SUBCOMMANDS = ("boundary", "classify", "thermal", "separable", "hamiltonian",
               "spectrum", "energy-bounds", "uncertainty")


class ConfigError(Exception):
    """Invalid command-line configuration (exit status 2)."""


@dataclass
class RunConfig:
    subcommand: str
    operator_paths: list = field(default_factory=list)
    directions: int = None
    betas: list = None
    gap_tol: float = GAP_TOL
    seed: int = 0
    restarts: int = separable.DEFAULT_RESTARTS
    threads: int = 1
    out: str = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if not 0 < self.gap_tol < 1:
            raise ConfigError(f"--gap-tol must lie in (0, 1), got {self.gap_tol}")
        if self.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        if self.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if self.directions is not None and self.directions < 1:
            raise ConfigError("--directions must be positive")
        if self.restarts < 1:
            raise ConfigError("--restarts must be at least 1")
        if self.betas is not None and any(not (b >= 0) for b in self.betas):
            raise ConfigError("--betas must be nonnegative")


def _split(text, cast=str, name="list"):
    try:
        return [cast(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {name} {text!r}: {exc}") from exc


def _beta(text):
    t = text.strip().lower()
    return math.inf if t in ("inf", "infinity") else float(t)


def _load_ops(paths):
    ops = []
    for p in paths:
        try:
            ops.append(parse_operator_file(p))
        except OSError as exc:
            raise ConfigError(f"cannot read operator file {p}: {exc.strerror}") from exc
    return ops


def _emit(cfg, text):
    if cfg.out:
        atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _floats(a):
    return [float(x) for x in np.ravel(a)]


def _directions(k, count, strategy, seed):
    strategy = strategy or boundary.default_strategy(k)
    return boundary.sample_directions(k, count, strategy, seed)


def _run_boundary(cfg):
    obs = boundary.ObservableSet(tuple(_load_ops(cfg.operator_paths)))
    D = _directions(obs.k, cfg.directions or 360, cfg.extra.get("strategy"), cfg.seed)
    pts = boundary.boundary_general(obs, D, cfg.gap_tol, threads=cfg.threads)
    k = obs.k
    header = [f"dir_{i + 1}" for i in range(k)] + [f"p_{i + 1}" for i in range(k)] + \
        ["support", "multiplicity", "depth"]
    rows = [_floats(bp.direction) + _floats(bp.point) + [bp.support_value, bp.multiplicity, bp.depth]
            for bp in pts]
    _emit(cfg, csv_text(header, rows))


def _run_classify(cfg):
    ops = _load_ops(cfg.operator_paths)
    if len(ops) == 2:
        res = classify.classify_k2_qutrit(*ops, gap_tol=cfg.gap_tol)
    elif len(ops) == 3:
        res = classify.classify_k3_qutrit(*ops, gap_tol=cfg.gap_tol)
    else:
        raise ConfigError("classify takes two or three operators")
    _emit(cfg, _json(res.to_dict()))


def _run_thermal(cfg):
    obs = boundary.ObservableSet(tuple(_load_ops(cfg.operator_paths)))
    betas = cfg.betas if cfg.betas is not None else [0.0, 1.0, math.inf]
    D = _directions(obs.k, cfg.directions or 64, cfg.extra.get("strategy"), cfg.seed)
    pts = thermal.thermal_range_sweep(obs, betas, D, cfg.gap_tol)
    k = obs.k
    header = ["beta"] + [f"dir_{i + 1}" for i in range(k)] + [f"p_{i + 1}" for i in range(k)]
    rows = [[tp.beta] + _floats(tp.fake_normal) + _floats(tp.point) for tp in pts]
    _emit(cfg, csv_text(header, rows))


def _run_separable(cfg):
    obs = boundary.ObservableSet(tuple(_load_ops(cfg.operator_paths)))
    dims = cfg.extra.get("dims")
    if dims is None or len(dims) != 2:
        raise ConfigError("--dims dA,dB is required")
    D = _directions(obs.k, cfg.directions or 64, cfg.extra.get("strategy"), cfg.seed)
    pts = separable.separable_boundary(obs, dims, D, restarts=cfg.restarts, seed=cfg.seed)
    k = obs.k
    header = [f"dir_{i + 1}" for i in range(k)] + [f"p_{i + 1}" for i in range(k)] + ["support"]
    rows = [_floats(bp.direction) + _floats(bp.point) + [bp.support_value] for bp in pts]
    _emit(cfg, csv_text(header, rows))


def _run_hamiltonian(cfg):
    model, N, prefix = cfg.extra["model"], cfg.extra.get("sites"), cfg.extra.get("out_prefix")
    if model in ("ising", "xxzz") and N is None:
        raise ConfigError("--sites is required for chain models")
    if prefix is None:
        raise ConfigError("--out-prefix is required")
    try:
        obs = models.model_observables(model, N)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    paths = []
    for i, H in enumerate(obs.operators, start=1):
        path = f"{prefix}H{i}.json"
        write_operator_file(path, H)
        paths.append(path)
    summary = {"model": model, "sites": N, "labels": list(obs.labels or ()), "files": paths}
    if cfg.out:
        atomic_write(cfg.out, _json(summary))
    else:
        sys.stdout.write("\n".join(paths) + "\n")


def _pair(cfg):
    ops = _load_ops(cfg.operator_paths)
    if len(ops) != 2:
        raise ConfigError("expected exactly two operators H0,H1")
    return ops


def _run_spectrum(cfg):
    H0, H1 = _pair(cfg)
    sweep = phase.spectrum_sweep(H0, H1, cfg.extra.get("num_thetas") or 720)
    d = sweep.levels.shape[1]
    header = ["theta"] + [f"E_{i}" for i in range(d)] + ["gap"]
    rows = [[t] + _floats(lv) + [g] for t, lv, g in zip(sweep.thetas, sweep.levels, sweep.ground_gap)]
    _emit(cfg, csv_text(header, rows))


def _run_energy_bounds(cfg):
    H0, H1 = _pair(cfg)
    known = cfg.extra.get("known") or []
    query = cfg.extra.get("query")
    if query is None or not known:
        raise ConfigError("--known and --query are required")
    data = [(a,) + phase.ground_data(H0, H1, a, cfg.gap_tol)[:2] for a in known]
    lower, upper = phase.energy_bounds(H0, H1, data, query)
    out = {"query": query, "lower": lower, "upper": upper,
           "known": [{"a": a, "energy": E, "derivative": dE} for a, E, dE in data]}
    _emit(cfg, _json(out))


def _run_uncertainty(cfg):
    paths = [cfg.extra.get("x"), cfg.extra.get("y")]
    if None in paths:
        raise ConfigError("--x and --y are required")
    X, Y = _load_ops(paths)
    kind = cfg.extra.get("kind", "sum")
    n = cfg.directions or 1082
    if kind == "sum":
        if n < 50:
            raise ConfigError("--directions must be at least 50")
        problem = uncertainty.uncertainty_lifted((X, Y), uncertainty.SUM)
        br = uncertainty.maccone_pati_bounds(X, Y, n, cfg.gap_tol, cfg.seed)
    elif kind == "product":
        problem = uncertainty.uncertainty_lifted((X, Y), uncertainty.PRODUCT)
        br = uncertainty.sampled_bounds(problem, n, cfg.gap_tol, cfg.seed)
    else:
        raise ConfigError(f"--kind must be sum or product, got {kind!r}")
    var, _ = uncertainty.min_uncertainty_point(problem, br)
    out = {
        "lower": br.lower,
        "upper": br.upper,
        "directions": br.num_directions,
        "argmin_point": _floats(br.argmin_point),
        "argmin_variances": None if var is None else _floats(var),
    }
    _emit(cfg, _json(out))


RUNNERS = {
    "boundary": _run_boundary,
    "classify": _run_classify,
    "thermal": _run_thermal,
    "separable": _run_separable,
    "hamiltonian": _run_hamiltonian,
    "spectrum": _run_spectrum,
    "energy-bounds": _run_energy_bounds,
    "uncertainty": _run_uncertainty,
}


def run(cfg):
    """Execute a validated configuration and return the exit status."""
    try:
        cfg.validate()
        RUNNERS[cfg.subcommand](cfg)
    except ConfigError as exc:
        sys.stderr.write(_json({"error": "ConfigError", "message": str(exc)}))
        return 2
    except (JnrError, ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gap-tol", type=float, default=GAP_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default=None)

    parser = argparse.ArgumentParser(prog="jnr", description="Joint numerical range toolkit.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("boundary", "boundary points of L(F1,...,Fk)")
    p.add_argument("--ops", required=True)
    p.add_argument("--directions", type=int, default=360)
    p.add_argument("--strategy", choices=("grid2d", "fibonacci3d", "seeded_uniform"))

    p = add("classify", "classify a qutrit range (k = 2 or 3)")
    p.add_argument("--ops", required=True)

    p = add("thermal", "thermal range points")
    p.add_argument("--ops", required=True)
    p.add_argument("--betas", default="0,1,inf")
    p.add_argument("--directions", type=int, default=64)
    p.add_argument("--strategy", choices=("grid2d", "fibonacci3d", "seeded_uniform"))

    p = add("separable", "inner approximation of the separable range")
    p.add_argument("--ops", required=True)
    p.add_argument("--dims", required=True)
    p.add_argument("--directions", type=int, default=64)
    p.add_argument("--restarts", type=int, default=separable.DEFAULT_RESTARTS)
    p.add_argument("--strategy", choices=("grid2d", "fibonacci3d", "seeded_uniform"))

    p = add("hamiltonian", "write model operators as JSON files")
    p.add_argument("--model", required=True, choices=("ising", "xxzz", "bicone", "ellipse-segment"))
    p.add_argument("--sites", type=int)
    p.add_argument("--out-prefix", required=True)

    p = add("spectrum", "spectra of cos(t) H0 + sin(t) H1")
    p.add_argument("--ops", required=True)
    p.add_argument("--num-thetas", type=int, default=720)

    p = add("energy-bounds", "bounds on the ground energy of H0 + a H1")
    p.add_argument("--ops", required=True)
    p.add_argument("--known", required=True)
    p.add_argument("--query", type=float, required=True)

    p = add("uncertainty", "bracket on the minimal variance sum or product")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--kind", default="sum", choices=("sum", "product"))
    p.add_argument("--directions", type=int, default=1082)
    return parser


def config_from_args(args):
    ns = vars(args)
    cfg = RunConfig(
        subcommand=args.subcommand,
        operator_paths=_split(ns["ops"]) if ns.get("ops") else [],
        directions=ns.get("directions"),
        betas=_split(ns["betas"], _beta, "--betas") if ns.get("betas") else None,
        gap_tol=args.gap_tol,
        seed=args.seed,
        restarts=ns.get("restarts") or separable.DEFAULT_RESTARTS,
        threads=args.threads,
        out=args.out,
    )
    for key in ("strategy", "model", "sites", "out_prefix", "num_thetas", "query", "x", "y", "kind"):
        if ns.get(key) is not None:
            cfg.extra[key] = ns[key]
    if ns.get("dims"):
        cfg.extra["dims"] = _split(ns["dims"], int, "--dims")
    if ns.get("known"):
        cfg.extra["known"] = _split(ns["known"], float, "--known")
    return cfg


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        sys.stderr.write(_json({"error": "ConfigError", "message": str(exc)}))
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
