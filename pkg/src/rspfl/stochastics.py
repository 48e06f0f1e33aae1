"""Sampling primitives, closed-form CDFs and goodness-of-fit tests.

All samplers draw exponentials by inversion, ``-ln(U)/rate`` with U uniform
on (0, 1], and take the random stream as an explicit argument.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

__all__ = [
    "KS_CRITICAL",
    "GammaSpec",
    "KsResult",
    "harmonic",
    "harmonic_sq",
    "exp_draws",
    "sample_exp_sum",
    "sample_exp_sums",
    "sample_gamma_int",
    "sample_gamma_ints",
    "sample_order_statistic",
    "sum_exp_range_cdf",
    "scaled_max_cdf",
    "sample_alg_direct",
    "ks_one_sample",
    "ks_two_sample",
    "ks_two_sample_threshold",
    "dominance_check",
    "gamma_dominance_condition",
]

# Asymptotic Kolmogorov quantiles c(alpha).
KS_CRITICAL = {0.05: 1.358, 0.01: 1.628}
MIN_KS_SAMPLES = 10


def harmonic(n: int) -> float:
    """H_n, summed from the smallest term up. ``harmonic(0) == 0``."""
    if n < 0:
        raise ValueError("harmonic number needs n >= 0")
    total = 0.0
    for i in range(n, 0, -1):
        total += 1.0 / i
    return total


def harmonic_sq(lo: int, hi: int) -> float:
    """sum_{i=lo}^{hi} 1/i**2, smallest term first."""
    total = 0.0
    for i in range(hi, lo - 1, -1):
        total += 1.0 / (i * i)
    return total


def _rates(rates) -> np.ndarray:
    r = np.asarray(rates, dtype=float).ravel()
    if r.size == 0:
        raise ValueError("rate list is empty")
    if np.any(~(r > 0)) or not np.all(np.isfinite(r)):
        raise ValueError("rates must be positive and finite")
    return r


def exp_draws(rng: np.random.Generator, size) -> np.ndarray:
    """Standard exponentials by inversion, U on (0, 1]."""
    return -np.log(1.0 - rng.random(size))


def sample_exp_sum(rates: Sequence[float], rng: np.random.Generator) -> float:
    """One draw of sum_i Exp(rates[i])."""
    r = _rates(rates)
    return float(np.sum(exp_draws(rng, r.size) / r))


def sample_exp_sums(rates: Sequence[float], size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent draws of sum_i Exp(rates[i])."""
    r = _rates(rates)
    return (exp_draws(rng, (size, r.size)) / r).sum(axis=1)


@dataclass(frozen=True)
class GammaSpec:
    """Erlang law Gamma(shape, rate): a sum of ``shape`` i.i.d. Exp(rate)."""

    shape: int
    rate: float

    def __post_init__(self):
        if int(self.shape) != self.shape or self.shape < 1:
            raise ValueError(f"shape must be an integer >= 1, got {self.shape}")
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    @property
    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def var(self) -> float:
        return self.shape / self.rate**2


def sample_gamma_int(spec: GammaSpec, rng: np.random.Generator) -> float:
    return float(np.sum(exp_draws(rng, int(spec.shape))) / spec.rate)


def sample_gamma_ints(spec: GammaSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    return exp_draws(rng, (size, int(spec.shape))).sum(axis=1) / spec.rate


def sample_order_statistic(m: int, j: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draws of the j-th smallest (1-based) of ``m`` i.i.d. Exp(1) variables."""
    if not 1 <= j <= m:
        raise ValueError(f"order index {j} outside [1, {m}]")
    y = exp_draws(rng, (size, m))
    return np.partition(y, j - 1, axis=1)[:, j - 1]


def _log_binom(n, k):
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def sum_exp_range_cdf(x, kappa: int, n: int):
    """CDF of sum_{i=kappa}^{n-1} Exp(i).

    Evaluated through the order statistic Y_(n-kappa) of n-1 standard
    exponentials: the probability that at least n-kappa of them are <= x.
    Binomial terms are summed in log space, and whichever tail is smaller is
    summed directly so that neither end loses precision.
    """
    if not 1 <= kappa <= n - 1:
        raise ValueError(f"need 1 <= kappa <= n-1, got kappa={kappa}, n={n}")
    x_arr = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x_arr)
    out = np.zeros(xs.shape)
    pos = xs > 0
    if np.any(pos):
        xp = xs[pos][:, None]
        j = np.arange(n)[None, :]
        log_p = np.log(-np.expm1(-xp))
        with np.errstate(invalid="ignore"):
            terms = _log_binom(n - 1, j) + j * log_p - (n - 1 - j) * xp
        terms = np.where(np.isnan(terms), -np.inf, terms)
        lo = logsumexp(terms[:, : n - kappa], axis=1)
        hi = logsumexp(terms[:, n - kappa:], axis=1)
        cdf = np.where(hi <= lo, np.exp(hi), -np.expm1(lo))
        out[pos] = np.clip(cdf, 0.0, 1.0)
    return float(out[0]) if x_arr.ndim == 0 else out.reshape(x_arr.shape)


def scaled_max_cdf(x, c: float, m: int):
    """(1 - e^{-c x})^m for x >= 0, else 0.

    This is the law of sum_{i=1}^m Exp(c i), equivalently of the maximum of
    m i.i.d. Exp(c) variables.
    """
    if not c > 0 or m < 1:
        raise ValueError("need c > 0 and m >= 1")
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        val = np.where(x_arr > 0, (-np.expm1(-c * np.maximum(x_arr, 0.0))) ** m, 0.0)
    return float(val) if x_arr.ndim == 0 else val


def sample_alg_direct(costs, rng: np.random.Generator, size: int | None = None):
    """Heuristic cost drawn from its closed-form law.

    F_n exactly when kappa == n, otherwise F_kappa + sum_{i=kappa}^{n-1} Exp(i).
    """
    from .flp import as_cost_profile, kappa as _kappa

    costs = as_cost_profile(costs)
    info = _kappa(costs)
    n = costs.n
    if info.kappa == n:
        return info.F_kappa if size is None else np.full(size, info.F_kappa)
    rates = np.arange(info.kappa, n, dtype=float)
    if size is None:
        return info.F_kappa + sample_exp_sum(rates, rng)
    return info.F_kappa + sample_exp_sums(rates, size, rng)


@dataclass(frozen=True)
class KsResult:
    statistic: float
    threshold: float
    passed: bool
    n: tuple

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["n"] = list(self.n) if len(self.n) > 1 else self.n[0]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _critical(alpha: float) -> float:
    try:
        return KS_CRITICAL[alpha]
    except KeyError:
        raise ValueError(f"alpha must be one of {sorted(KS_CRITICAL)}, got {alpha}") from None


def ks_one_sample(samples, cdf: Callable, alpha: float = 0.01) -> KsResult:
    """One-sample Kolmogorov-Smirnov test against a vectorised ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < MIN_KS_SAMPLES:
        raise ValueError(f"KS test needs at least {MIN_KS_SAMPLES} samples, got {n}")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    thr = _critical(alpha) / math.sqrt(n)
    return KsResult(d, thr, d <= thr, (n,))


def ks_two_sample_threshold(na: int, nb: int, alpha: float = 0.01) -> float:
    return _critical(alpha) * math.sqrt((na + nb) / (na * nb))


def _ecdfs(a: np.ndarray, b: np.ndarray):
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return fa, fb


def ks_two_sample(a, b, alpha: float = 0.01) -> KsResult:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size < MIN_KS_SAMPLES or b.size < MIN_KS_SAMPLES:
        raise ValueError(f"KS test needs at least {MIN_KS_SAMPLES} samples per side")
    fa, fb = _ecdfs(a, b)
    d = float(np.max(np.abs(fa - fb)))
    thr = ks_two_sample_threshold(a.size, b.size, alpha)
    return KsResult(d, thr, d <= thr, (a.size, b.size))


def dominance_check(dominant, dominated, band: float | None = None) -> tuple[bool, float]:
    """Empirical check that ``dominant`` is stochastically at least ``dominated``.

    Passes when the ECDF of ``dominant`` never exceeds the ECDF of
    ``dominated`` by more than ``band`` on the pooled sample points. The
    default band is the two-sample KS threshold at alpha = 0.01. Returns the
    verdict and the largest excess ``max(F_dominant - F_dominated)``.
    """
    a = np.sort(np.asarray(dominant, dtype=float))
    b = np.sort(np.asarray(dominated, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("dominance check needs nonempty samples")
    if band is None:
        band = ks_two_sample_threshold(a.size, b.size, 0.01)
    fa, fb = _ecdfs(a, b)
    excess = float(np.max(fa - fb))
    return excess <= band, excess


def gamma_dominance_condition(rates: Sequence[float], eta: float) -> bool:
    """True iff prod(rates) <= eta**m, compared in log space.

    Under this condition sum_i Exp(rates[i]) stochastically dominates
    Gamma(m, eta).
    """
    r = _rates(rates)
    if not eta > 0:
        raise ValueError("eta must be positive")
    return bool(math.fsum(np.log(r)) <= r.size * math.log(eta))
