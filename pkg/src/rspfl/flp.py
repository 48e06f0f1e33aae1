"""Uncapacitated facility location on a metric, the kappa-cheapest heuristic
and exact enumeration solvers.

Facility ``i`` of the ascending cost profile sits at vertex ``i`` (0-based
here; the 1-based vertex ``i+1`` in the usual notation).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .metric import Metric
from .stochastics import harmonic_sq

__all__ = [
    "CostProfile",
    "Instance",
    "Solution",
    "KappaInfo",
    "PolynomialRatioWarning",
    "as_cost_profile",
    "make_instance",
    "kappa",
    "expected_k_cheapest_cost",
    "solution_cost",
    "alg_solve",
    "opt_exact",
    "opt_exact_k",
    "opt_all_k",
    "alg_moments",
    "MAX_ENUM_N",
]

MAX_ENUM_N = 20
# Low vertices handled as one precomputed block during subset enumeration.
_LOW_BITS = 14


class PolynomialRatioWarning(UserWarning):
    """Opening costs violate f_n / f_1 <= n**q."""


@dataclass(frozen=True)
class CostProfile:
    f: np.ndarray = field(repr=False)

    def __post_init__(self):
        f = np.array(self.f, dtype=float).ravel()
        if f.size == 0:
            raise ValueError("cost profile is empty")
        if not np.all(np.isfinite(f)) or np.any(f <= 0):
            raise ValueError("opening costs must be positive and finite")
        if np.any(np.diff(f) < 0):
            raise ValueError("cost profile must be sorted ascending")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)
        F = np.cumsum(f)
        F.setflags(write=False)
        object.__setattr__(self, "F", F)

    @property
    def n(self) -> int:
        return self.f.size

    def prefix(self, k: int) -> float:
        """F_k with F_0 = 0."""
        return 0.0 if k == 0 else float(self.F[k - 1])

    @classmethod
    def from_raw(cls, raw: Iterable[float]) -> "CostProfile":
        return cls(np.sort(np.asarray(list(raw), dtype=float)))

    @classmethod
    def equal(cls, f: float, n: int) -> "CostProfile":
        return cls(np.full(n, float(f)))


def as_cost_profile(costs) -> CostProfile:
    if isinstance(costs, CostProfile):
        return costs
    if isinstance(costs, Instance):
        return costs.costs
    return CostProfile.from_raw(costs)


@dataclass(frozen=True)
class Instance:
    metric: Metric
    costs: CostProfile

    def __post_init__(self):
        if self.costs.n != self.metric.n:
            raise ValueError(f"{self.costs.n} costs for a metric on {self.metric.n} vertices")

    @property
    def n(self) -> int:
        return self.metric.n


@dataclass(frozen=True)
class Solution:
    open: tuple
    opening_cost: float
    connection_cost: float
    total: float

    def to_dict(self) -> dict:
        return {"open": list(self.open), "opening_cost": self.opening_cost,
                "connection_cost": self.connection_cost, "total": self.total}


@dataclass(frozen=True)
class KappaInfo:
    kappa: int
    F_kappa: float


def make_instance(metric: Metric, raw_costs, q: float = 3.0) -> Instance:
    """Pair a metric with opening costs, sorted ascending.

    Warns with :class:`PolynomialRatioWarning` when ``f_n / f_1 > n**q``.
    """
    raw = np.asarray(raw_costs, dtype=float).ravel()
    if raw.size != metric.n:
        raise ValueError(f"{raw.size} costs for a metric on {metric.n} vertices")
    if np.any(~(raw > 0)):
        raise ValueError("opening costs must be positive")
    costs = CostProfile.from_raw(raw)
    n = metric.n
    if costs.f[-1] / costs.f[0] > float(n) ** q:
        warnings.warn(f"cost ratio f_n/f_1 = {costs.f[-1] / costs.f[0]:.3g} exceeds n^{q:g}",
                      PolynomialRatioWarning, stacklevel=2)
    return Instance(metric, costs)


def kappa(costs) -> KappaInfo:
    """Largest i (1-based) with f_i < 1/(i-1); i = 1 always qualifies."""
    costs = as_cost_profile(costs)
    f = costs.f
    k = 1
    for i in range(2, costs.n + 1):
        if f[i - 1] < 1.0 / (i - 1):
            k = i
    return KappaInfo(k, costs.prefix(k))


def expected_k_cheapest_cost(costs, k: int) -> float:
    """g(k) = F_k + H_{n-1} - H_{k-1}: mean cost of opening the k cheapest."""
    costs = as_cost_profile(costs)
    n = costs.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if k == n:
        return costs.prefix(n)
    return costs.prefix(k) + _harmonic_range(k, n - 1)


def _harmonic_range(lo: int, hi: int) -> float:
    """sum_{i=lo}^{hi} 1/i, which is H_hi - H_{lo-1} without the cancellation."""
    total = 0.0
    for i in range(hi, lo - 1, -1):
        total += 1.0 / i
    return total


def _check_open(inst: Instance, U) -> tuple:
    U = tuple(sorted({int(u) for u in U}))
    if not U:
        raise ValueError("open facility set must be nonempty")
    if U[0] < 0 or U[-1] >= inst.n:
        raise ValueError(f"facility index outside [0, {inst.n})")
    return U


def solution_cost(inst: Instance, U) -> Solution:
    """c(U) = f(U) + sum_v min_{u in U} d(u, v), with 0-based vertices."""
    U = _check_open(inst, U)
    opening = float(np.sum(inst.costs.f[list(U)]))
    connection = float(np.sum(inst.metric.d[list(U)].min(axis=0)))
    return Solution(U, opening, connection, opening + connection)


def alg_solve(inst: Instance) -> Solution:
    """Open the kappa cheapest facilities, i.e. vertices 0..kappa-1."""
    k = kappa(inst.costs).kappa
    return solution_cost(inst, range(k))


def _subset_totals(inst: Instance):
    """Yield (mask offset, totals) blocks covering every subset mask.

    ``totals[j]`` is c(U) for the subset with bitmask ``offset + j``; vertex v
    is bit v. The empty set gets +inf.
    """
    n = inst.n
    d = inst.metric.d
    f = inst.costs.f
    lo = min(n, _LOW_BITS)
    size = 1 << lo
    # nearest open facility distance for every low subset, built by doubling
    near = np.empty((size, n))
    near[0] = np.inf
    opening = np.zeros(size)
    for b in range(lo):
        s = 1 << b
        np.minimum(near[:s], d[b], out=near[s:2 * s])
        opening[s:2 * s] = opening[:s] + f[b]
    for hi in range(1 << (n - lo)):
        if hi == 0:
            totals = opening + near.sum(axis=1)
            totals[0] = np.inf
        else:
            hv = [lo + b for b in range(n - lo) if hi >> b & 1]
            hnear = d[hv].min(axis=0)
            hopen = float(sum(f[v] for v in hv))
            totals = (opening + hopen) + np.minimum(near, hnear).sum(axis=1)
        yield hi << lo, totals


def _mask_to_set(mask: int) -> tuple:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def _popcounts(n: int) -> np.ndarray:
    lo = min(n, _LOW_BITS)
    pc = np.zeros(1 << lo, dtype=np.int64)
    for b in range(lo):
        s = 1 << b
        pc[s:2 * s] = pc[:s] + 1
    return pc


def _enumeration_guard(n: int):
    if n > MAX_ENUM_N:
        raise ValueError(f"exact enumeration limited to n <= {MAX_ENUM_N}, got n={n}")


def _best(inst: Instance, candidates: list[int]) -> Solution:
    # among tied masks prefer the lexicographically smallest sorted vertex tuple
    sols = [solution_cost(inst, _mask_to_set(m)) for m in candidates]
    best = min(s.total for s in sols)
    return min((s for s in sols if s.total == best), key=lambda s: s.open)


def opt_all_k(inst: Instance) -> tuple[Solution, list[Solution]]:
    """Exact OPT and OPT_k for every k = 1..n in a single enumeration.

    Returns ``(opt, per_k)`` with ``per_k[k-1]`` the best size-k solution.
    """
    n = inst.n
    _enumeration_guard(n)
    pc_low = _popcounts(n)
    best_k = np.full(n + 1, np.inf)
    where_k: list[list[int]] = [[] for _ in range(n + 1)]
    lo = min(n, _LOW_BITS)
    for offset, totals in _subset_totals(inst):
        pc = pc_low + bin(offset >> lo).count("1")
        for k in np.unique(pc):
            if k == 0:
                continue
            sel = pc == k
            t = totals[sel]
            m = t.min()
            if m < best_k[k]:
                best_k[k] = m
                where_k[k] = []
            if m <= best_k[k]:
                idx = np.flatnonzero(sel)[t == m]
                where_k[k].extend(int(offset + j) for j in idx)
    per_k = [_best(inst, where_k[k]) for k in range(1, n + 1)]
    best = min(s.total for s in per_k)
    opt = min((s for s in per_k if s.total == best), key=lambda s: s.open)
    return opt, per_k


def opt_exact(inst: Instance) -> Solution:
    """Minimum of c(U) over all nonempty U by enumeration (n <= 20).

    Ties resolve to the lexicographically smallest vertex tuple.
    """
    _enumeration_guard(inst.n)
    best = np.inf
    cands: list[int] = []
    for offset, totals in _subset_totals(inst):
        m = totals.min()
        if m < best:
            best, cands = m, []
        if m <= best:
            cands.extend(int(offset + j) for j in np.flatnonzero(totals == m))
    return _best(inst, cands)


def opt_exact_k(inst: Instance, k: int) -> Solution:
    """Minimum of c(U) over all U with exactly k facilities."""
    n = inst.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    _enumeration_guard(n)
    if k == n:
        return solution_cost(inst, range(n))
    pc_low = _popcounts(n)
    lo = min(n, _LOW_BITS)
    best = np.inf
    cands: list[int] = []
    for offset, totals in _subset_totals(inst):
        sel = pc_low == k - bin(offset >> lo).count("1")
        if not sel.any():
            continue
        t = totals[sel]
        m = t.min()
        if m < best:
            best, cands = m, []
        if m <= best:
            cands.extend(int(offset + j) for j in np.flatnonzero(sel)[t == m])
    return _best(inst, cands)


def alg_moments(costs) -> tuple[float, float]:
    """Mean and second moment of the heuristic's cost.

    (F_n, F_n^2) when kappa == n; otherwise with
    mu = F_kappa + H_{n-1} - H_{kappa-1}:
    (mu, mu^2 + sum_{i=kappa}^{n-1} 1/i^2).
    """
    costs = as_cost_profile(costs)
    n = costs.n
    info = kappa(costs)
    if info.kappa == n:
        return info.F_kappa, info.F_kappa**2
    mu = info.F_kappa + _harmonic_range(info.kappa, n - 1)
    return mu, mu * mu + harmonic_sq(info.kappa, n - 1)

