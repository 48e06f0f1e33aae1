"""Command line front end.

Exit status: 0 when every verdict passes, 1 on a verdict failure, 2 on a
usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import _json
from .bounds import opt_lower_tail_bound, theorem2_bound
from .experiments import (ExperimentConfig, derive_seed, joint_event_check, run_bound_suite,
                          run_distribution_suite, run_ratio_experiment, run_sweep)
from .fileio import InstanceFormatError, read_instance, write_instance
from .flp import MAX_ENUM_N, CostProfile, Instance, alg_solve, kappa, opt_exact
from .metric import build_metric, sample_edge_weights

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _z_grid(text: str):
    try:
        lo, hi, steps = text.split(":")
        return float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:steps, got {text!r}") from None


def _n_list(text: str):
    try:
        vals = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or comma list, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty n")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_n_list, help="vertex count (sweep: comma list)")
    common.add_argument("--seed", type=int, default=0)
    cost = common.add_mutually_exclusive_group()
    cost.add_argument("--equal-cost", type=float, metavar="F")
    cost.add_argument("--costs", metavar="FILE", help="JSON list or one cost per line")
    common.add_argument("--reps", type=int, default=1000)
    common.add_argument("--alpha", type=float, choices=(0.05, 0.01), default=0.01)
    common.add_argument("--z-grid", type=_z_grid, metavar="LO:HI:STEPS")
    common.add_argument("--k", type=int, help="bounds: report only this k")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="rspfl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="sample an instance")
    s = sub.add_parser("solve", parents=[common], help="heuristic and exact solutions")
    s.add_argument("--instance", metavar="FILE")
    sub.add_parser("verify", parents=[common], help="distribution suite")
    sub.add_parser("bounds", parents=[common], help="bound report and OPT tail bound grid")
    e = sub.add_parser("experiment", parents=[common], help="Monte Carlo experiment")
    e.add_argument("--kind", choices=("ratio", "bounds", "distribution"), default="ratio")
    sub.add_parser("sweep", parents=[common], help="mean ratio across several n")
    return p


def _single_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if len(args.n) != 1:
        raise UsageError("--n takes a single value for this command")
    if args.n[0] < 2:
        raise UsageError("--n must be >= 2")
    return args.n[0]


def _read_costs(path: str) -> list[float]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InstanceFormatError(f"{path}: {e.strerror}") from e
    try:
        vals = json.loads(text)
        if not isinstance(vals, list):
            raise InstanceFormatError(f"{path}: expected a JSON list of costs")
    except json.JSONDecodeError:
        vals = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                vals.append(float(line))
            except ValueError:
                raise InstanceFormatError(f"{path}:{lineno}: not a number: {line!r}") from None
    for i, v in enumerate(vals):
        if not isinstance(v, (int, float)) or not v > 0 or not math.isfinite(v):
            raise InstanceFormatError(f"{path}: cost [{i}] must be positive, got {v!r}")
    return [float(v) for v in vals]


def _cost_spec(args, n: int | None):
    if args.equal_cost is not None:
        if not args.equal_cost > 0:
            raise UsageError("--equal-cost must be positive")
        return f"equal:{args.equal_cost!r}"
    if args.costs is not None:
        vals = _read_costs(args.costs)
        if n is not None and len(vals) != n:
            raise InstanceFormatError(f"{args.costs}: {len(vals)} costs, expected {n}")
        return vals
    raise UsageError("one of --equal-cost or --costs is required")


def _config(args, kind: str) -> ExperimentConfig:
    n = _single_n(args)
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    return ExperimentConfig(n, _cost_spec(args, n), args.reps, args.seed, args.alpha, kind,
                            args.threads, args.z_grid)


def _emit(args, text: str):
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as e:
            raise InstanceFormatError(f"{args.out}: {e.strerror}") from e
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    n = _single_n(args)
    costs = _profile(args, n)
    w = sample_edge_weights(n, np.random.default_rng(derive_seed(args.seed)))
    inst = Instance(build_metric(w), costs)
    _emit(args, write_instance(inst, weights=w))
    return EXIT_OK


def _profile(args, n) -> CostProfile:
    spec = _cost_spec(args, n)
    if isinstance(spec, str):
        return CostProfile.equal(float(spec.split(":", 1)[1]), n)
    return CostProfile.from_raw(spec)


def _cmd_solve(args) -> int:
    if args.instance:
        inst = read_instance(args.instance)
    else:
        n = _single_n(args)
        w = sample_edge_weights(n, np.random.default_rng(derive_seed(args.seed)))
        inst = Instance(build_metric(w), _profile(args, n))
    out = {"n": inst.n, "kappa": kappa(inst.costs).kappa, "alg": alg_solve(inst).to_dict()}
    if inst.n <= MAX_ENUM_N:
        opt = opt_exact(inst)
        out["opt"] = opt.to_dict()
        out["ratio"] = out["alg"]["total"] / opt.total
    if args.format == "csv":
        rows = ["solver,open,opening_cost,connection_cost,total"]
        for name in ("alg", "opt"):
            if name in out:
                s = out[name]
                rows.append(f"{name},{' '.join(str(v) for v in s['open'])},"
                            + ",".join(format(s[c], ".12g") for c in
                                       ("opening_cost", "connection_cost", "total")))
        _emit(args, "\n".join(rows) + "\n")
    else:
        _emit(args, _json.dumps(out) + "\n")
    return EXIT_OK


def _result_out(args, res) -> int:
    _emit(args, res.to_csv() if args.format == "csv" else res.to_json() + "\n")
    if args.out:
        sys.stdout.write(res.summary() + "\n")
    return EXIT_OK if res.passed else EXIT_FAIL


def _cmd_verify(args) -> int:
    return _result_out(args, run_distribution_suite(_config(args, "distribution")))


def _cmd_bounds(args) -> int:
    n = _single_n(args)
    costs = _profile(args, n)
    rep = theorem2_bound(costs)
    lo, hi, steps = args.z_grid or (float(costs.F[0]), float(costs.F[-1]), 20)
    grid = [{"z": float(z), "bound": opt_lower_tail_bound(float(z), costs)}
            for z in np.linspace(lo, hi, steps)]
    if args.k is not None:
        if not 1 <= args.k <= n - 1:
            raise UsageError(f"--k must lie in [1, {n - 1}]")
        rep = replace(rep, per_k=(rep.per_k[args.k - 1],))
    if args.format == "csv":
        _emit(args, rep.to_csv())
    else:
        _emit(args, _json.dumps({"report": rep.to_dict(), "opt_tail_bound": grid}) + "\n")
    values = [rep.theorem2_value] + [g["bound"] for g in grid]
    return EXIT_OK if all(math.isfinite(v) for v in values) else EXIT_FAIL


def _cmd_experiment(args) -> int:
    cfg = _config(args, args.kind)
    if args.kind == "distribution":
        res = run_distribution_suite(cfg)
    elif args.kind == "bounds":
        res = run_bound_suite(cfg)
    else:
        res = run_ratio_experiment(cfg)
        checks = joint_event_check(res)
        res.tests["joint_event"] = checks
        res.verdicts["joint_event"] = all(c["pass"] for c in checks)
    return _result_out(args, res)


def _cmd_sweep(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if min(args.n) < 2:
        raise UsageError("--n values must be >= 2")
    cfg = ExperimentConfig(min(args.n), _cost_spec(args, None), args.reps, args.seed,
                           args.alpha, "sweep", args.threads)
    if not isinstance(cfg.cost_spec, str):
        raise UsageError("sweep needs --equal-cost")
    res = run_sweep(cfg, args.n)
    _emit(args, res.to_csv() if args.format == "csv" else res.to_json() + "\n")
    return EXIT_OK if res.passed else EXIT_FAIL


_COMMANDS = {"gen": _cmd_gen, "solve": _cmd_solve, "verify": _cmd_verify,
             "bounds": _cmd_bounds, "experiment": _cmd_experiment, "sweep": _cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, InstanceFormatError, ValueError) as e:
        print(f"rspfl {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
