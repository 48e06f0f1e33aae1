"""Concrete evaluation of the analytic bounds on OPT and on E[ALG/OPT].

Everything here is a closed-form number: rational Padé sandwiches for
alpha^m e^alpha E_m(alpha), where E_m(alpha) = int_alpha^inf e^{-t} t^{-m} dt,
moment bounds for X_k = 1/(F_{n-k} + Z_k)^2 with Z_k ~ Gamma(k, e C(n,2)/k),
and the assembled Cauchy-Schwarz bound on the expected approximation ratio.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from . import _json
from .flp import CostProfile, alg_moments, as_cost_profile, kappa
from .stochastics import GammaSpec, sample_gamma_ints

__all__ = [
    "PadeSandwich",
    "MomentBounds",
    "BoundReport",
    "SUPPORTED_PADE",
    "opt_lower_tail_bound",
    "nk_gamma_spec",
    "sample_opt_nk_lb",
    "normalized_exp_integral",
    "exp_integral_oracle",
    "pade_bounds",
    "moment_bounds",
    "theorem2_bound",
    "corollary_regime",
]

# Integration window for the normalised exponential integral; the discarded
# tail is at most e^{-_QUAD_T} < 1e-14.
_QUAD_T = 33.0


def opt_lower_tail_bound(z: float, costs) -> float:
    """Union bound on P(OPT < z), clamped to [0, 1].

    sum_{i=1}^{zeta} C(n,i) C(n-1,i-1) (1 - e^{-(z-F_i)})^{n-i} with
    zeta = max{k : z >= F_k}. Returns 0 below F_1 and 1 above F_n.
    """
    costs = as_cost_profile(costs)
    n = costs.n
    F = costs.F
    if z < F[0]:
        return 0.0
    if z > F[-1]:
        return 1.0
    zeta = int(np.searchsorted(F, z, side="right"))
    total = 0.0
    for i in range(1, zeta + 1):
        gap = z - F[i - 1]
        if i < n and gap <= 0.0:
            continue
        log_term = (gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
                    + gammaln(n) - gammaln(i) - gammaln(n - i + 1))
        if i < n:
            log_term += (n - i) * math.log(-math.expm1(-gap))
        total += math.exp(log_term)
    return min(total, 1.0)


def nk_gamma_spec(n: int, k: int) -> GammaSpec:
    """Law of Z_k: Gamma(k, e C(n,2) / k)."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    return GammaSpec(k, math.e * math.comb(n, 2) / k)


def sample_opt_nk_lb(costs, k: int, rng: np.random.Generator, size: int | None = None):
    """Draw F_{n-k} + Z_k, a stochastic lower bound on OPT_{n-k}."""
    costs = as_cost_profile(costs)
    spec = nk_gamma_spec(costs.n, k)
    base = costs.prefix(costs.n - k)
    z = sample_gamma_ints(spec, 1 if size is None else size, rng)
    return base + float(z[0]) if size is None else base + z


def normalized_exp_integral(alpha: float, m: int) -> float:
    """alpha^m e^alpha E_m(alpha) by adaptive quadrature.

    Substituting t = alpha + s turns the integral into
    int_0^inf e^{-s} (alpha / (alpha + s))^m ds, whose integrand is bounded
    by e^{-s}; the window [0, 33] leaves a tail below 1e-14.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if m < 1:
        raise ValueError(f"exponent m must be >= 1, got {m}")

    def g(s):
        return math.exp(-s - m * math.log1p(s / alpha))

    # the integrand bends on the scale s ~ alpha; give quad that breakpoint
    brk = [p for p in (alpha, 10 * alpha) if p < _QUAD_T]
    val, _ = integrate.quad(g, 0.0, _QUAD_T, points=brk or None,
                            epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


def exp_integral_oracle(alpha: float, m: int) -> float:
    """E_m(alpha) = int_alpha^inf e^{-t} / t^m dt."""
    return normalized_exp_integral(alpha, m) * math.exp(-alpha - m * math.log(alpha))


@dataclass(frozen=True)
class PadeSandwich:
    alpha: float
    m: int
    order: int
    lower: float | None
    upper: float | None


def _poly(coeffs, a):
    # coefficients from the highest power down
    acc = 0.0
    for c in coeffs:
        acc = acc * a + c
    return acc


def _pade_order1(a, m):
    return a / (a + 1), (a + 1) / (a + 2)


def _pade_order2(a, m):
    # written with k = m + 1, as the rationals appear for E_{k-1}
    k = m + 1
    lower = _poly([1, k + 1, 0], a) / _poly([1, 2 * k, k * (k - 1)], a)
    upper = _poly([1, k + 3, 2], a) / _poly([1, 2 * (k + 1), k * (k + 1)], a)
    return lower, upper


def _pade_order3(a, m):
    return None, _poly([1, 11, 26, 6], a) / _poly([1, 12, 36, 24], a)


def _pade_order4_upper(a, m):
    # written with k = m + 3, as the rational appears for E_{k-3}
    k = m + 3
    num = [1, 3 * k + 7, 3 * (k * k + 3 * k + 6), (k + 3) * (k * k - k + 10), 24]
    den = [1, 4 * (k + 1), 6 * k * (k + 1), 4 * k * (k * k - 1), k * (k * k - 1) * (k - 2)]
    return _poly(num, a) / _poly(den, a)


def _pade_order4(a, m):
    lower = None
    if m == 1:
        lower = _poly([1, 15, 58, 50, 0], a) / _poly([1, 16, 72, 96, 24], a)
    return lower, _pade_order4_upper(a, m)


_PADE = {1: _pade_order1, 2: _pade_order2, 3: _pade_order3, 4: _pade_order4}

# (order, admissible m) for every rational the bound derivations print
SUPPORTED_PADE = {
    1: lambda m: m == 1,
    2: lambda m: m >= 1,
    3: lambda m: m == 1,
    4: lambda m: m >= 1,
}


def pade_bounds(alpha: float, m: int, order: int) -> PadeSandwich:
    """Rational lower/upper bounds on alpha^m e^alpha E_m(alpha).

    Supported combinations: order 1 and 3 for m = 1 only; order 2 for every
    m >= 1; order 4 for every m >= 1, with a lower side only at m = 1.
    Absent sides are ``None``.
    """
    if order not in SUPPORTED_PADE or not SUPPORTED_PADE[order](m):
        raise ValueError(f"no Padé bound for m={m}, order={order}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lo, hi = _PADE[order](float(alpha), m)
    return PadeSandwich(float(alpha), m, order, lo, hi)


@dataclass(frozen=True)
class MomentBounds:
    k: int
    F: float
    exk_lower: float
    exk_upper: float
    exk2_upper: float
    var_upper: float


def moment_bounds(n: int, k: int, F: float) -> MomentBounds:
    """Bounds on E[X_k], E[X_k^2] and Var(X_k) for X_k = 1/(F + Z_k)^2.

    With a = e C(n,2):

    * E[X_k] <= (a^2 F + 2k a) / (a^2 F^3 + 2k(k+1) a F^2 + k^3(k+1) F)
    * E[X_k] >= a^2 / (a^2 F^2 + 2k^2 a F + k^3(k-1))
    * E[X_1^2] <= (3a^2 F + 2a) / (3a^2 F^5 + 12a F^4 + 6F^3)
    * E[X_k^2] <= (a^4 F + 4k a^3) / (a^4 F^5 + 4k(k+1) a^3 F^4
      + 6k^3(k+1) a^2 F^3 + 4k^4(k^2-1) a F^2 + k^5(k^2-1)(k-2) F), k >= 2

    Each fraction is divided through by its leading power of ``a`` before
    evaluation. ``var_upper`` is ``exk2_upper - exk_lower**2``.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    if not F > 0:
        raise ValueError(f"F must be positive, got {F}")
    a = math.e * math.comb(n, 2)
    u = 1.0 / a
    exk_upper = (F + 2 * k * u) / (F**3 + 2 * k * (k + 1) * F**2 * u + k**3 * (k + 1) * F * u * u)
    exk_lower = 1.0 / (F**2 + 2 * k * k * F * u + k**3 * (k - 1) * u * u)
    if k == 1:
        exk2_upper = (3 * F + 2 * u) / (3 * F**5 + 12 * F**4 * u + 6 * F**3 * u * u)
    else:
        den = (F**5 + 4 * k * (k + 1) * F**4 * u + 6 * k**3 * (k + 1) * F**3 * u**2
               + 4 * k**4 * (k * k - 1) * F**2 * u**3 + k**5 * (k * k - 1) * (k - 2) * F * u**4)
        exk2_upper = (F + 4 * k * u) / den
    return MomentBounds(k, float(F), exk_lower, exk_upper, exk2_upper,
                        exk2_upper - exk_lower**2)


@dataclass(frozen=True)
class BoundReport:
    n: int
    theorem2_value: float
    max_term: float
    variance_sum: float
    alg_second_moment: float
    kappa: int
    per_k: tuple = field(repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_k"] = [asdict(r) for r in self.per_k]
        return d

    def to_json(self, indent=None) -> str:
        return _json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "F_n-k", "exk_lower", "exk_upper", "exk2_upper", "var_upper"])
        for r in self.per_k:
            w.writerow([r.k] + [f"{v:.12g}" for v in
                                (r.F, r.exk_lower, r.exk_upper, r.exk2_upper, r.var_upper)])
        return buf.getvalue()


def theorem2_bound(costs) -> BoundReport:
    """Upper bound on E[ALG/OPT] from Cauchy-Schwarz.

    sqrt(E[ALG^2]) * sqrt(max{1/F_n^2, max_k E[X_k]} + sqrt(sum_k Var(X_k)))
    with every moment of X_k replaced by its bound from
    :func:`moment_bounds`. The k = 0 term (Z_0 = 0) contributes 1/F_n^2 to
    the maximum and nothing to the variance sum.
    """
    costs = as_cost_profile(costs)
    n = costs.n
    _, alg2 = alg_moments(costs)
    rows = tuple(moment_bounds(n, k, costs.prefix(n - k)) for k in range(1, n))
    max_term = max([1.0 / costs.prefix(n) ** 2] + [r.exk_upper for r in rows])
    var_sum = 0.0
    for r in rows:
        var_sum += r.var_upper
    value = math.sqrt(alg2) * math.sqrt(max_term + math.sqrt(var_sum))
    return BoundReport(n, value, max_term, var_sum, alg2, kappa(costs).kappa, rows)


def corollary_regime(n: int, f: float) -> str:
    """Classify an equal-cost profile (n, f) by the ratio-bound regime.

    ``"one-plus-o1"`` if f n^3 < 1, ``"constant"`` if f n (ln n)^{1/3} <= 1,
    ``"quarter-root-log"`` if kappa >= n/2 (the finite-n stand-in for
    kappa in Theta(n)), otherwise ``"not-applicable"``.
    """
    if not f > 0:
        raise ValueError("f must be positive")
    if f * n**3 < 1:
        return "one-plus-o1"
    if f * n * math.log(n) ** (1.0 / 3.0) <= 1:
        return "constant"
    if 2 * kappa(CostProfile.equal(f, n)).kappa >= n:
        return "quarter-root-log"
    return "not-applicable"
