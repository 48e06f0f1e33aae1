"""Seeded Monte Carlo experiments on random shortest path metrics.

Replication ``r`` always draws from ``np.random.default_rng(derive_seed(
master_seed, *stream, r))``, and records are assembled in replication order,
so a run is bit-identical for any worker count.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import _json
from .bounds import opt_lower_tail_bound, sample_opt_nk_lb, theorem2_bound
from .flp import (MAX_ENUM_N, CostProfile, Instance, alg_moments, alg_solve, kappa,
                  opt_all_k, opt_exact)
from .metric import build_metric, sample_edge_weights
from .stochastics import (KsResult, dominance_check, ks_one_sample, ks_two_sample,
                          sample_alg_direct, sample_exp_sums, sample_order_statistic,
                          sum_exp_range_cdf)

__all__ = [
    "derive_seed",
    "ExperimentConfig",
    "ExperimentResult",
    "parse_cost_spec",
    "sample_instance",
    "run_ratio_experiment",
    "run_distribution_suite",
    "run_bound_suite",
    "run_sweep",
    "SweepResult",
    "joint_event_check",
    "ratio_of_conditional_check",
]

# stream tags for auxiliary draws that are not tied to a replication
_STREAM_DIRECT = 1 << 40
_STREAM_RENYI = 2 << 40
_STREAM_GAMMA_LB = 3 << 40

MAX_BOUND_SUITE_N = 16


def derive_seed(master_seed: int, *keys: int) -> int:
    """64-bit child seed from a master seed and integer keys.

    The keys are hashed by numpy's SeedSequence (entropy = master seed,
    spawn key = keys) and the first two 32-bit words of its state are packed
    into one 64-bit integer.
    """
    ss = np.random.SeedSequence(int(master_seed) & (2**64 - 1),
                                spawn_key=tuple(int(k) for k in keys))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def parse_cost_spec(spec, n: int) -> CostProfile:
    """``"equal:f"`` or an explicit sequence of n raw costs."""
    if isinstance(spec, CostProfile):
        if spec.n != n:
            raise ValueError(f"{spec.n} costs for n={n}")
        return spec
    if isinstance(spec, str):
        kind, _, val = spec.partition(":")
        if kind != "equal" or not val:
            raise ValueError(f"unrecognised cost spec {spec!r}")
        return CostProfile.equal(float(val), n)
    raw = list(spec)
    if len(raw) != n:
        raise ValueError(f"{len(raw)} costs for n={n}")
    return CostProfile.from_raw(raw)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    cost_spec: object
    replications: int
    master_seed: int = 0
    alpha: float = 0.01
    kind: str = "ratio"
    threads: int = 1
    z_grid: tuple | None = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.alpha not in (0.05, 0.01):
            raise ValueError("alpha must be 0.05 or 0.01")

    @property
    def costs(self) -> CostProfile:
        return parse_cost_spec(self.cost_spec, self.n)

    def echo(self) -> dict:
        spec = self.cost_spec
        if isinstance(spec, CostProfile):
            spec = list(spec.f)
        elif not isinstance(spec, str):
            spec = list(spec)
        return {"n": self.n, "cost_spec": spec, "replications": self.replications,
                "master_seed": self.master_seed, "alpha": self.alpha, "kind": self.kind,
                "z_grid": None if self.z_grid is None else list(self.z_grid)}


@dataclass
class ExperimentResult:
    config: dict
    records: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    tests: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.verdicts.values())

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.records], dtype=float)

    def to_dict(self) -> dict:
        return {"config": self.config, "aggregates": self.aggregates, "tests": self.tests,
                "verdicts": self.verdicts, "passed": self.passed, "records": self.records}

    def to_json(self) -> str:
        return _json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rep", "seed", "ALG", "OPT", "ratio"])
        for r in self.records:
            w.writerow([r["rep"], r["seed"]] + [_g12(r.get(c)) for c in ("ALG", "OPT", "ratio")])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"{'quantity':<28}{'value':>22}"]
        for k, v in self.aggregates.items():
            if isinstance(v, (int, float)):
                lines.append(f"{k:<28}{_g12(v):>22}")
        for k, v in self.verdicts.items():
            lines.append(f"{k:<28}{'PASS' if v else 'FAIL':>22}")
        return "\n".join(lines)


def _g12(x) -> str:
    return "" if x is None else format(float(x), ".12g")


def sample_instance(n: int, costs: CostProfile, seed: int) -> Instance:
    rng = np.random.default_rng(seed)
    return Instance(build_metric(sample_edge_weights(n, rng)), costs)


def _map(func, items, threads: int):
    if threads <= 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    if x.size < 2:
        return float(x.mean()), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def _ratio_record(costs, seed, rep, with_opt_k):
    inst = sample_instance(costs.n, costs, seed)
    alg = alg_solve(inst).total
    rec = {"rep": rep, "seed": seed, "ALG": alg}
    if with_opt_k:
        opt, per_k = opt_all_k(inst)
        rec["OPT_k"] = [s.total for s in per_k]
    else:
        opt = opt_exact(inst)
    rec["OPT"] = opt.total
    rec["ratio"] = alg / opt.total
    return rec


def _feasibility_verdicts(res: ExperimentResult, costs: CostProfile):
    alg = res.column("ALG")
    opt = res.column("OPT")
    f1 = float(costs.f[0])
    res.verdicts["feasibility"] = bool(np.all(opt >= f1) and np.all(opt <= alg))
    if res.records and "OPT_k" in res.records[0]:
        res.verdicts["opt_is_min_opt_k"] = all(r["OPT"] == min(r["OPT_k"]) for r in res.records)


def run_ratio_experiment(cfg: ExperimentConfig, stream: Sequence[int] = (),
                         with_opt_k: bool = False) -> ExperimentResult:
    """ALG/OPT over seeded random instances with exact OPT.

    When kappa >= n/2 the empirical mean ratio is compared with
    :func:`~rspfl.bounds.theorem2_bound`.
    """
    if cfg.n > MAX_ENUM_N:
        raise ValueError(f"exact OPT needs n <= {MAX_ENUM_N}, got {cfg.n}")
    costs = cfg.costs
    seeds = [derive_seed(cfg.master_seed, *stream, r) for r in range(cfg.replications)]
    records = _map(lambda r: _ratio_record(costs, seeds[r], r, with_opt_k),
                   range(cfg.replications), cfg.threads)
    res = ExperimentResult(cfg.echo(), records)
    ratio = res.column("ratio")
    mean, se = _mean_se(ratio)
    res.aggregates.update({
        "kappa": kappa(costs).kappa,
        "mean_ratio": mean, "se_ratio": se,
        "min_ratio": float(ratio.min()), "max_ratio": float(ratio.max()),
        "mean_ALG": float(res.column("ALG").mean()),
        "mean_OPT": float(res.column("OPT").mean()),
    })
    res.verdicts["ratio_at_least_one"] = bool(np.all(ratio >= 1.0))
    _feasibility_verdicts(res, costs)
    info = kappa(costs)
    if 2 * info.kappa >= cfg.n:
        bound = theorem2_bound(costs).theorem2_value
        res.aggregates["theorem2_bound"] = bound
        res.verdicts["ratio_below_bound"] = mean - 3 * se <= bound
    return res


def run_distribution_suite(cfg: ExperimentConfig) -> ExperimentResult:
    """Distributional checks of the heuristic's cost and of order statistics.

    (a) one-sample KS of ALG - F_kappa against the closed-form CDF,
    (b) two-sample KS of pipeline ALG against direct draws of its law,
    (c) two-sample KS of Y_(n-i) against sum_{k=i}^{n-1} Exp(k) for every i,
    (d) mean ALG against its exact mean, 4 standard errors.
    When kappa = n, (a)-(b) are replaced by a constancy check ALG == F_n.
    """
    costs = cfg.costs
    n, N = cfg.n, cfg.replications
    info = kappa(costs)
    seeds = [derive_seed(cfg.master_seed, r) for r in range(N)]

    def one(r):
        inst = sample_instance(n, costs, seeds[r])
        return {"rep": r, "seed": seeds[r], "ALG": alg_solve(inst).total}

    res = ExperimentResult(cfg.echo(), _map(one, range(N), cfg.threads))
    alg = res.column("ALG")
    mu, _ = alg_moments(costs)
    mean, se = _mean_se(alg)
    res.aggregates.update({"kappa": info.kappa, "F_kappa": info.F_kappa,
                           "mean_ALG": mean, "se_ALG": se, "exact_mean_ALG": mu})
    if info.kappa == n:
        res.verdicts["alg_constant_F_n"] = bool(np.allclose(alg, info.F_kappa, rtol=1e-12, atol=0))
    else:
        a = ks_one_sample(alg - info.F_kappa,
                          lambda x: sum_exp_range_cdf(x, info.kappa, n), cfg.alpha)
        direct = sample_alg_direct(costs, np.random.default_rng(
            derive_seed(cfg.master_seed, _STREAM_DIRECT)), size=N)
        b = ks_two_sample(alg, direct, cfg.alpha)
        res.tests["alg_one_sample_ks"] = a.to_dict()
        res.tests["alg_vs_direct_ks"] = b.to_dict()
        res.verdicts["alg_one_sample_ks"] = a.passed
        res.verdicts["alg_vs_direct_ks"] = b.passed
        res.verdicts["alg_mean_4se"] = abs(mean - mu) <= 4 * se
    renyi = renyi_checks(n, N, cfg.master_seed, cfg.alpha)
    for i, ks in renyi.items():
        res.tests[f"renyi_i{i}"] = ks.to_dict()
        res.verdicts[f"renyi_i{i}"] = ks.passed
    return res


def renyi_checks(n: int, size: int, master_seed: int, alpha: float = 0.01) -> dict[int, KsResult]:
    """Two-sample KS of Y_(n-i) (of n-1 unit exponentials) vs sum_{k=i}^{n-1} Exp(k)."""
    out = {}
    for i in range(1, n):
        rng = np.random.default_rng(derive_seed(master_seed, _STREAM_RENYI, n, i))
        a = sample_order_statistic(n - 1, n - i, size, rng)
        b = sample_exp_sums(np.arange(i, n, dtype=float), size, rng)
        out[i] = ks_two_sample(a, b, alpha)
    return out


def run_bound_suite(cfg: ExperimentConfig) -> ExperimentResult:
    """Monte Carlo confirmation of the two bounds on OPT.

    (a) On a z-grid, empirical P(OPT < z) <= opt_lower_tail_bound(z) plus
    three binomial standard errors. (b) For every k, exact OPT_{n-k} samples
    dominate draws of F_{n-k} + Gamma(k, e C(n,2)/k) within the KS band.
    """
    if cfg.n > MAX_BOUND_SUITE_N:
        raise ValueError(f"bound suite needs n <= {MAX_BOUND_SUITE_N}, got {cfg.n}")
    res = run_ratio_experiment(replace(cfg, kind="bounds"), with_opt_k=True)
    costs = cfg.costs
    n, N = cfg.n, cfg.replications
    opt = res.column("OPT")
    lo, hi, steps = cfg.z_grid or (float(costs.F[0]), float(costs.F[-1]), 20)
    grid = []
    ok = True
    for z in np.linspace(lo, hi, int(steps)):
        p = float(np.mean(opt < z))
        se = math.sqrt(p * (1 - p) / N)
        b = opt_lower_tail_bound(float(z), costs)
        passed = p <= b + 3 * se
        ok &= passed
        grid.append({"z": float(z), "empirical": p, "se": se, "bound": b, "pass": passed})
    res.tests["tail_grid"] = grid
    res.verdicts["opt_tail_bound"] = ok
    opt_k = np.array([r["OPT_k"] for r in res.records])
    for k in range(1, n):
        rng = np.random.default_rng(derive_seed(cfg.master_seed, _STREAM_GAMMA_LB, k))
        lb = sample_opt_nk_lb(costs, k, rng, size=N)
        passed, excess = dominance_check(opt_k[:, n - k - 1], lb)
        res.tests[f"gamma_lb_k{k}"] = {"pass": passed, "max_excess": excess}
        res.verdicts[f"gamma_lb_k{k}"] = passed
    return res


@dataclass
class SweepResult:
    rows: list
    results: list = field(repr=False)
    trend_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.trend_ok and all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"rows": self.rows, "trend_ok": self.trend_ok, "passed": self.passed}

    def to_json(self) -> str:
        return _json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "kappa", "mean_ratio", "se_ratio", "min_ratio", "max_ratio"])
        for r in self.rows:
            w.writerow([r["n"], r["kappa"]] + [_g12(r[c]) for c in
                                               ("mean_ratio", "se_ratio", "min_ratio", "max_ratio")])
        return buf.getvalue()


def run_sweep(template: ExperimentConfig, n_values: Sequence[int],
              slack: float = 0.05) -> SweepResult:
    """Mean ALG/OPT per n; the trend passes when the mean at the largest n is
    at most the mean at the smallest n plus ``slack``."""
    n_values = sorted(set(int(n) for n in n_values))
    if not n_values:
        raise ValueError("empty n list")
    if n_values[-1] > MAX_ENUM_N:
        raise ValueError(f"exact OPT needs n <= {MAX_ENUM_N}")
    if not isinstance(template.cost_spec, str):
        raise ValueError("a sweep needs an n-independent cost spec such as 'equal:f'")
    results, rows = [], []
    for n in n_values:
        res = run_ratio_experiment(replace(template, n=n), stream=(n,))
        results.append(res)
        agg = res.aggregates
        rows.append({"n": n, "kappa": agg["kappa"], "mean_ratio": agg["mean_ratio"],
                     "se_ratio": agg["se_ratio"], "min_ratio": agg["min_ratio"],
                     "max_ratio": agg["max_ratio"]})
    trend = rows[-1]["mean_ratio"] <= rows[0]["mean_ratio"] + slack
    return SweepResult(rows, results, trend)


def joint_event_check(res: ExperimentResult, quantiles=(0.25, 0.5, 0.75)) -> list[dict]:
    """P(ALG > x and OPT < y) <= 2 sqrt(P(ALG > x) P(OPT < y)) + 3 SE on a grid
    of empirical quantiles of ALG (for x) and OPT (for y)."""
    alg = res.column("ALG")
    opt = res.column("OPT")
    N = alg.size
    out = []
    for x in np.quantile(alg, quantiles):
        for y in np.quantile(opt, quantiles):
            a = alg > x
            b = opt < y
            pj = float(np.mean(a & b))
            se = math.sqrt(pj * (1 - pj) / N)
            rhs = 2 * math.sqrt(float(a.mean()) * float(b.mean()))
            out.append({"x": float(x), "y": float(y), "joint": pj, "rhs": rhs,
                        "pass": pj <= rhs + 3 * se})
    return out


def ratio_of_conditional_check(res: ExperimentResult, y: float, delta: float) -> dict:
    """Empirical check of

        P(OPT < y) E[ALG/OPT | OPT < y]
            <= P(OPT < y) / delta^2 + int_{1/delta^2}^inf P(ALG >= sqrt(x)) dx

    for a delta with P(OPT <= delta) = 0. The integral equals
    E[(ALG^2 - 1/delta^2)^+]. Both sides are sample means; the left side gets
    three standard errors of slack.
    """
    alg = res.column("ALG")
    opt = res.column("OPT")
    if np.any(opt <= delta):
        raise ValueError("delta must lie below every observed OPT")
    ind = opt < y
    lhs_terms = np.where(ind, alg / opt, 0.0)
    lhs, se = _mean_se(lhs_terms)
    rhs = float(ind.mean()) / delta**2 + float(np.mean(np.maximum(alg**2 - 1 / delta**2, 0.0)))
    return {"y": y, "delta": delta, "lhs": lhs, "se": se, "rhs": rhs,
            "pass": lhs - 3 * se <= rhs}
