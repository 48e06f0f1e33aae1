"""Acceptance suite: eleven criteria, one PASS/FAIL line each.

Run under pytest (``pytest tests/test_acceptance.py -v``) or directly
(``python tests/test_acceptance.py``). Every criterion uses master seed 2024.
"""
from __future__ import annotations

import contextlib
import io
import math
import subprocess
import sys
import time
from functools import cache
from pathlib import Path

import numpy as np
import pytest
from scipy.special import expn

sys.path.insert(0, str(Path(__file__).parent))

from rspfl.bounds import (SUPPORTED_PADE, moment_bounds, nk_gamma_spec,  # noqa: E402
                          normalized_exp_integral, pade_bounds, theorem2_bound)
from rspfl.cli import main as cli_main  # noqa: E402
from rspfl.experiments import (ExperimentConfig, derive_seed, joint_event_check,  # noqa: E402
                               renyi_checks, run_bound_suite, run_distribution_suite,
                               run_ratio_experiment, run_sweep)
from rspfl.flp import CostProfile, alg_moments  # noqa: E402
from rspfl.metric import build_metric, sample_edge_weights, validate_metric  # noqa: E402
from rspfl.stochastics import sample_gamma_ints  # noqa: E402

from oracles import cf_normalized_exp_integral, floyd_warshall, gamma_moment, weight_matrix  # noqa: E402,E501

SEED = 2024


def _cfg(n, spec, reps, **kw):
    return ExperimentConfig(n, spec, reps, master_seed=SEED, **kw)


# --- shared experiment data (reused by criterion 10) ------------------------------------------

@cache
def _tail_suite():
    return run_bound_suite(_cfg(10, "equal:0.3", 10_000, z_grid=(0.3, 3.0, 20)))


@cache
def _dominance_suite():
    return run_bound_suite(_cfg(8, "equal:0.3", 10_000))


@cache
def _theorem2_runs():
    out = {}
    for tag, (label, spec) in enumerate([("f=1/12", f"equal:{1 / 12!r}"), ("f=0.05", "equal:0.05")]):
        cfg = _cfg(12, spec, 5000)
        out[label] = (cfg, run_ratio_experiment(cfg, stream=(12, tag)))
    return out


@cache
def _sweep():
    return run_sweep(_cfg(8, "equal:1", 5000), [8, 12, 16], slack=0.05)


# --- criteria -----------------------------------------------------------------------------

def ac1():
    rng = np.random.default_rng(derive_seed(SEED, 1))
    bad = {"symmetry": 0, "diagonal": 0, "triangle": 0}
    for _ in range(1000):
        for v in validate_metric(build_metric(sample_edge_weights(30, rng)), tol=1e-9):
            bad[v["kind"]] += 1
    worst = 0.0
    for _ in range(50):
        w = sample_edge_weights(12, rng)
        d = build_metric(w).d
        ref = floyd_warshall(weight_matrix(12, w.w))
        worst = max(worst, float(np.max(np.abs(d - ref) / np.where(ref > 0, ref, 1.0))))
    ok = sum(bad.values()) == 0 and worst <= 1e-12
    return ok, f"violations {bad}; max rel. deviation from Floyd-Warshall {worst:.2e}"


def ac2():
    res = run_distribution_suite(_cfg(10, "equal:0.3", 20_000))
    ks = res.tests["alg_one_sample_ks"]
    mu, _ = alg_moments(CostProfile.equal(0.3, 10))
    mean = res.aggregates["mean_ALG"]
    ok = (res.aggregates["kappa"] == 4 and ks["statistic"] <= 0.01151
          and abs(mean - mu) <= 0.02 and abs(mu - 2.195635) < 1e-6)
    return ok, (f"KS D={ks['statistic']:.5f} (limit 0.01151); mean {mean:.5f} vs exact {mu:.6f}")


def ac3():
    res = renyi_checks(10, 20_000, SEED, alpha=0.01)
    ok = len(res) == 9 and all(r.passed for r in res.values())
    worst = max(r.statistic / r.threshold for r in res.values())
    return ok, f"9 two-sample KS tests, worst D/threshold {worst:.3f}"


def ac4():
    res = _tail_suite()
    grid = res.tests["tail_grid"]
    ok = len(grid) == 20 and grid[0]["z"] == 0.3 and grid[-1]["z"] == 3.0 and all(
        g["empirical"] <= g["bound"] + 3 * g["se"] for g in grid)
    margin = min(g["bound"] + 3 * g["se"] - g["empirical"] for g in grid)
    return ok, f"20 z-points in [0.3, 3.0], min margin {margin:.4f}"


def ac5():
    res = _dominance_suite()
    checks = [res.tests[f"gamma_lb_k{k}"] for k in range(1, 8)]
    ok = all(c["pass"] for c in checks)
    worst = max(c["max_excess"] for c in checks)
    return ok, f"k = 1..7 dominance within the alpha=0.01 band, max excess {worst:.4f}"


def ac6():
    alphas = np.logspace(math.log10(0.05), 2, 40)
    worst_oracle = 0.0
    violations = []
    combos = [(o, m) for o, ok in SUPPORTED_PADE.items() for m in range(1, 8) if ok(m)]
    for a in alphas:
        for m in range(1, 8):
            q = normalized_exp_integral(a, m)
            ref = a * math.exp(a) * expn(m, a)
            worst_oracle = max(worst_oracle, abs(q - ref), abs(q - cf_normalized_exp_integral(a, m)))
        for order, m in combos:
            p = pade_bounds(a, m, order)
            q = normalized_exp_integral(a, m)
            if (p.lower is not None and p.lower > q) or (p.upper is not None and p.upper < q):
                violations.append((order, m, a))
        p1, p2 = pade_bounds(a, 1, 1), pade_bounds(a, 1, 2)
        if not (p1.lower <= p2.lower and p2.upper <= p1.upper):
            violations.append(("nest", 1, a))
    ok = not violations and worst_oracle <= 1e-10
    return ok, (f"{len(combos)} (order, m) combinations x 40 alphas, {len(violations)} violations, "
                f"oracle error {worst_oracle:.1e}")


def ac7():
    mc_in = strict_in = exact_in = var_ok = total = 0
    for n in (4, 8, 12, 16):
        for k in (1, 2, 3, 5):
            if k > n - 1:
                continue  # k = 5 needs n >= 6
            for F in (0.1, 0.5, 2.0):
                total += 1
                rng = np.random.default_rng(derive_seed(SEED, 7, n, k, round(F * 10)))
                x = 1.0 / (F + sample_gamma_ints(nk_gamma_spec(n, k), 100_000, rng)) ** 2
                b = moment_bounds(n, k, F)
                m, se = x.mean(), x.std(ddof=1) / math.sqrt(x.size)
                strict_in += b.exk_lower <= m <= b.exk_upper
                mc_in += b.exk_lower - 3 * se <= m <= b.exk_upper + 3 * se
                var_ok += x.var(ddof=1) <= b.var_upper
                e1, e2 = gamma_moment(n, k, F, 1), gamma_moment(n, k, F, 2)
                exact_in += (b.exk_lower <= e1 <= b.exk_upper and e2 <= b.exk2_upper
                             and e2 - e1 * e1 <= b.var_upper)
    ok = mc_in == exact_in == var_ok == total
    return ok, (f"{total} cells: MC mean in bounds +-3SE {mc_in}/{total} "
                f"(strict {strict_in}/{total}), exact moments in bounds {exact_in}/{total}, "
                f"MC variance <= var_upper {var_ok}/{total}")


def ac8():
    parts, ok = [], True
    for label, (cfg, res) in _theorem2_runs().items():
        mean = res.aggregates["mean_ratio"]
        bound = theorem2_bound(cfg.costs).theorem2_value
        ok &= res.aggregates["kappa"] == 12 and mean <= bound
        parts.append(f"{label}: mean {mean:.4f} <= bound {bound:.4f}")
    return ok, "; ".join(parts)


def ac9():
    sw = _sweep()
    ok = sw.trend_ok and all(r["min_ratio"] >= 1.0 and r["mean_ratio"] >= 1.0 for r in sw.rows)
    means = ", ".join(f"n={r['n']}: {r['mean_ratio']:.4f}" for r in sw.rows)
    return ok, f"{means}; slack 0.05"


def ac10():
    ratio_runs = [_tail_suite(), _dominance_suite(), *(r for _, r in _theorem2_runs().values()),
                  *_sweep().results]
    feas = sum(r.verdicts["feasibility"] for r in ratio_runs)
    reps = sum(len(r.records) for r in ratio_runs)
    opt_k = [_tail_suite().verdicts["opt_is_min_opt_k"], _dominance_suite().verdicts["opt_is_min_opt_k"]]
    joint = [c["pass"] for r in ratio_runs for c in joint_event_check(r)]
    ok = feas == len(ratio_runs) and all(opt_k) and all(joint) and len(joint) == 9 * len(ratio_runs)
    return ok, (f"{reps} replications in {len(ratio_runs)} runs: f1<=OPT<=ALG {feas}/{len(ratio_runs)}, "
                f"OPT=min OPT_k {sum(opt_k)}/2, joint-event {sum(joint)}/{len(joint)}")


_AC11_COMMANDS = [
    ["gen", "--n", "12", "--equal-cost", "0.1", "--seed", "5"],
    ["solve", "--n", "12", "--equal-cost", "0.1", "--seed", "5"],
    ["solve", "--n", "12", "--equal-cost", "0.1", "--seed", "5", "--format", "csv"],
    ["verify", "--n", "10", "--equal-cost", "0.3", "--reps", "2000", "--seed", "5"],
    ["bounds", "--n", "12", "--equal-cost", "0.05"],
    ["bounds", "--n", "12", "--equal-cost", "0.05", "--format", "csv", "--k", "3"],
    ["experiment", "--n", "9", "--equal-cost", "0.2", "--reps", "500", "--seed", "5"],
    ["experiment", "--kind", "bounds", "--n", "7", "--equal-cost", "0.3", "--reps", "300",
     "--seed", "5", "--format", "csv"],
    ["experiment", "--kind", "distribution", "--n", "8", "--equal-cost", "0.3", "--reps", "500",
     "--seed", "5"],
    ["sweep", "--n", "6,8", "--equal-cost", "1", "--reps", "300", "--seed", "5"],
]


def _cli_bytes(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(argv)
    return code, buf.getvalue().encode()


def ac11():
    mismatched = []
    for argv in _AC11_COMMANDS:
        runs = [_cli_bytes(argv + extra) for extra in ([], ["--threads", "1"], ["--threads", "8"])]
        if len(set(runs)) != 1 or not runs[0][1]:
            mismatched.append(argv[0])
    # the installed entry point produces the same bytes as the in-process call
    argv = _AC11_COMMANDS[3] + ["--threads", "8"]
    proc = subprocess.run([sys.executable, "-m", "rspfl", *argv], capture_output=True, check=False)
    if (proc.returncode, proc.stdout) != _cli_bytes(argv):
        mismatched.append("subprocess")
    return not mismatched, (f"{len(_AC11_COMMANDS)} commands x threads {{default, 1, 8}} + "
                            f"subprocess rerun; mismatches: {mismatched or 'none'}")


CRITERIA = {1: ac1, 2: ac2, 3: ac3, 4: ac4, 5: ac5, 6: ac6, 7: ac7, 8: ac8, 9: ac9, 10: ac10,
            11: ac11}
TITLES = {
    1: "metric axioms and shortest-path oracle",
    2: "ALG distribution",
    3: "order-statistic identity",
    4: "OPT lower-tail bound",
    5: "OPT_{n-k} Gamma dominance",
    6: "Padé sandwiches",
    7: "moment bounds",
    8: "assembled ratio bound",
    9: "ratio trend across n",
    10: "feasibility and consistency invariants",
    11: "determinism",
}


def run_criterion(i):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[i]()
    line = f"AC{i:<2} {'PASS' if ok else 'FAIL'}  {TITLES[i]} ({time.perf_counter() - t0:.1f}s): {detail}"
    return ok, line


@pytest.mark.slow
@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_acceptance(i, capsys):
    ok, line = run_criterion(i)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(i) for i in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
