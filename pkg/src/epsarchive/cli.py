"""Command-line front end: ``run``, ``reference``, ``metrics``, ``bound`` and ``roi``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import io
from .archiver import ArchiverConfig
from .core import Mode, ToleranceSettings
from .errors import ConfigurationError, EpsArchiveError
from .metrics import (
    archive_bound_image,
    archive_bound_param,
    bound_for_run,
    convergence_radius,
    hausdorff,
    hamming,
    nondominated_indices,
    reference_set,
    roi_indices,
    semi_dist,
)
from .problems import Box, get_problem
from .search import GeneratorSpec, run

log = logging.getLogger("epsarchive")

RUN_DEFAULTS = {
    "problem": None,
    "param": [],
    "epsilon": None,
    "delta": "0",
    "delta_star": "auto",
    "mode": Mode.IMAGE.value,
    "budget": None,
    "count": "feasible",
    "seed": "0",
    "generator": None,
    "batch_size": "1",
    "archive_out": None,
    "summary_out": None,
    "instance_out": None,
    "strict": "false",
}


def parse_vector(text) -> np.ndarray:
    if isinstance(text, (int, float)):
        return np.array([float(text)])
    try:
        return np.array([float(t) for t in str(text).replace(";", ",").split(",") if t.strip()])
    except ValueError:
        raise ConfigurationError(f"expected comma-separated numbers, got {text!r}") from None


def parse_params(items) -> dict:
    params = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigurationError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        value = value.strip()
        if "," in value:
            params[key.strip()] = parse_vector(value).tolist()
            continue
        for cast in (int, float):
            try:
                params[key.strip()] = cast(value)
                break
            except ValueError:
                pass
        else:
            params[key.strip()] = value
    return params


def _truthy(value) -> bool:
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def _merge_config(args, defaults: dict) -> dict:
    """Explicit flags override config-file values, which override defaults."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        for key, value in io.read_config(args.config).items():
            if key not in defaults:
                raise ConfigurationError(f"unknown config key {key!r}")
            merged[key] = [v.strip() for v in value.split(";") if v.strip()] if key == "param" else value
    for key in defaults:
        value = getattr(args, key, None)
        if value not in (None, [], False):
            merged[key] = value
    return merged


def build_settings(k: int, epsilon, delta, delta_star, strict=False, default_eps=None) -> ToleranceSettings:
    if epsilon is None:
        if default_eps is None:
            raise ConfigurationError("--epsilon is required for this problem")
        eps = np.asarray(default_eps, dtype=float)
    else:
        eps = parse_vector(epsilon)
    if eps.size == 1:
        eps = np.full(k, eps[0])
    d = parse_vector(delta)
    star = None if str(delta_star).strip().lower() == "auto" else parse_vector(delta_star)
    if star is not None and star.size == 1:
        star = float(star[0])
    return ToleranceSettings(eps, d if d.size > 1 else float(d[0]), star, strict)


def cmd_run(args) -> int:
    cfg = _merge_config(args, RUN_DEFAULTS)
    if cfg["problem"] is None or cfg["budget"] is None:
        raise ConfigurationError("run needs --problem and --budget")
    params = parse_params(cfg["param"])
    problem = get_problem(cfg["problem"], **params)
    settings = build_settings(problem.k, cfg["epsilon"], cfg["delta"], cfg["delta_star"],
                              _truthy(cfg["strict"]), problem.default_epsilon)
    archiver = ArchiverConfig(settings, Mode.parse(cfg["mode"]))
    kind = cfg["generator"] or ("uniform-box" if problem.kind == "continuous" else "binary-feasible")
    generator = GeneratorSpec(kind, int(cfg["batch_size"]), int(cfg["seed"]))
    archive, summary = run(problem, generator, archiver, int(float(cfg["budget"])), count=cfg["count"])

    payload = summary.to_dict()
    payload["config"]["params"] = params
    bound = None
    if archiver.mode is Mode.IMAGE and settings.is_scalar and settings.delta_star[0] > 0 and summary.image_min:
        bound = bound_for_run(settings, summary.image_min, summary.image_max)
    elif archiver.mode is Mode.PARAMETER and settings.scalar_delta_star() > 0:
        bound = archive_bound_param(settings.scalar_delta_star(), problem.domain)
    payload["bound"] = bound
    payload["within_bound"] = None if bound is None else bool(len(archive) <= bound)
    payload["nondominated_size"] = int(len(nondominated_indices(archive.Y))) if len(archive) else 0

    if cfg["archive_out"]:
        io.write_archive(cfg["archive_out"], archive)
    if cfg["summary_out"]:
        io.write_json(cfg["summary_out"], payload)
    if cfg["instance_out"]:
        if problem.name != "knapsack":
            raise ConfigurationError("--instance-out only applies to the knapsack problem")
        io.write_instance(cfg["instance_out"], problem)
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_reference(args) -> int:
    problem = get_problem(args.problem, **parse_params(args.param))
    eps = parse_vector(args.epsilon)
    if eps.size == 1:
        eps = np.full(problem.k, eps[0])
    ref = reference_set(problem, eps, parse_vector(args.resolution) if "," in args.resolution else float(args.resolution),
                        cell_cap=args.cell_cap, weak=args.weak)
    io.write_points(args.out, ref.X, ref.Y)
    print(json.dumps({"points": len(ref), "out": args.out}))
    return 0


def cmd_metrics(args) -> int:
    _, A = io.read_points(args.archive)
    _, R = io.read_points(args.reference)
    out = {
        "dist_reference_to_archive": semi_dist(R, A),
        "dist_archive_to_reference": semi_dist(A, R),
        "hausdorff": hausdorff(R, A),
    }
    if args.wide_reference:
        if args.delta is None:
            raise ConfigurationError("--wide-reference needs --delta")
        _, W = io.read_points(args.wide_reference)
        out["dist_wide_to_reference"] = semi_dist(W, R)
        out["D"] = convergence_radius(W, R, args.delta)
        out["hausdorff_within_D"] = bool(out["hausdorff"] <= out["D"])
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_bound(args) -> int:
    lower, upper = parse_vector(args.lower), parse_vector(args.upper)
    delta_star = args.delta if args.delta_star is None else args.delta_star
    if Mode.parse(args.mode) is Mode.PARAMETER:
        value = archive_bound_param(delta_star, Box(lower, upper))
    else:
        eps = parse_vector(args.epsilon)
        value = archive_bound_image(eps, args.delta, delta_star, lower, upper)
    print(format(value, ".12g"))
    return 0


def cmd_roi(args) -> int:
    X, Y = io.read_points(args.archive)
    hits = roi_indices(Y, parse_vector(args.y0), parse_vector(args.tol) if "," in args.tol else float(args.tol))
    w = csv.writer(sys.stdout)
    header = [f"x{i + 1}" for i in range(X.shape[1])] + [f"f{i + 1}" for i in range(Y.shape[1])]
    anchor = None
    if args.hamming:
        exact = np.flatnonzero(np.all(Y == parse_vector(args.y0), axis=1))
        if not exact.size:
            raise ConfigurationError("--hamming needs an archive row whose objectives equal y0")
        anchor = X[exact[0]]
        header.append("hamming")
    w.writerow(header)
    for i in hits:
        row = [io.fmt(v) for v in X[i]] + [io.fmt(v) for v in Y[i]]
        if anchor is not None:
            row.append(hamming(X[i], anchor))
        w.writerow(row)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epsarchive", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="random search with the bounded eps-archiver")
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--problem")
    p.add_argument("--param", action="append", default=[], help="problem parameter key=value (repeatable)")
    p.add_argument("--epsilon", help="comma-separated; defaults to the problem's setting")
    p.add_argument("--delta", help="scalar or comma-separated vector (default 0)")
    p.add_argument("--delta-star", help="'auto' (= delta) or a value")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--budget", help="number of points N")
    p.add_argument("--count", choices=["feasible", "draws"], help="what the budget counts (default feasible)")
    p.add_argument("--seed")
    p.add_argument("--generator", choices=["uniform-box", "binary-feasible", "bitflip-mutation"])
    p.add_argument("--batch-size")
    p.add_argument("--archive-out")
    p.add_argument("--summary-out")
    p.add_argument("--instance-out", help="knapsack only: write j,c1,c2,w")
    p.add_argument("--strict", action="store_const", const="true", help="require delta_star < delta")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reference", help="brute-force grid reference set")
    p.add_argument("--problem", required=True)
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--epsilon", required=True)
    p.add_argument("--resolution", required=True, help="grid step (scalar or per dimension)")
    p.add_argument("--cell-cap", type=int, default=250_000)
    p.add_argument("--weak", action="store_true", help="strict comparison (weak Pareto points)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("metrics", help="semi-distances and Hausdorff distance between point files")
    p.add_argument("archive")
    p.add_argument("reference")
    p.add_argument("--wide-reference", help="reference set built with epsilon + 2 delta")
    p.add_argument("--delta", type=float)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bound", help="archive size bound")
    p.add_argument("--mode", default=Mode.IMAGE.value, choices=[m.value for m in Mode if m is not Mode.UNBOUNDED])
    p.add_argument("--epsilon", default="1")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--delta-star", type=float)
    p.add_argument("--lower", required=True, help="image box m (or parameter box lower)")
    p.add_argument("--upper", required=True, help="image box M (or parameter box upper)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("roi", help="archive rows inside a tolerance box around y0")
    p.add_argument("archive")
    p.add_argument("--y0", required=True)
    p.add_argument("--tol", required=True)
    p.add_argument("--hamming", action="store_true", help="append Hamming distance to the row at y0")
    p.set_defaults(func=cmd_roi)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (EpsArchiveError, OSError) as exc:
        print(f"epsarchive: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
