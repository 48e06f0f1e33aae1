"""Random shortest path metrics on the complete graph.

Edge weights are i.i.d. Exp(1); distances are shortest-path lengths with
respect to those weights.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import dijkstra

from . import _json

__all__ = [
    "EdgeWeights",
    "Metric",
    "sample_edge_weights",
    "build_metric",
    "validate_metric",
    "pair_index",
]


def pair_index(u: int, v: int, n: int) -> int:
    """Linear index of the unordered pair ``{u, v}`` (0-based, ``u != v``).

    Pairs are ordered lexicographically with ``u < v``:
    (0,1), (0,2), ..., (0,n-1), (1,2), ...
    """
    if u == v:
        raise ValueError("pair_index needs two distinct vertices")
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


@dataclass(frozen=True)
class EdgeWeights:
    n: int
    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2 vertices, got {self.n}")
        w = np.array(self.w, dtype=float).ravel()
        expected = self.n * (self.n - 1) // 2
        if w.size != expected:
            raise ValueError(f"n={self.n} needs {expected} weights, got {w.size}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("edge weights must be positive and finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    def matrix(self) -> np.ndarray:
        """Symmetric n x n weight matrix with zero diagonal."""
        a = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        a[iu] = self.w
        return a + a.T

    def weight(self, u: int, v: int) -> float:
        return float(self.w[pair_index(u, v, self.n)])

    def to_json(self) -> str:
        """JSON with every weight written to 17 significant digits."""
        return _json.dumps({"n": self.n, "weights": list(self.w)}, indent=None)

    @classmethod
    def from_json(cls, text: str) -> "EdgeWeights":
        obj = json.loads(text)
        return cls(int(obj["n"]), np.asarray(obj["weights"], dtype=float))


@dataclass(frozen=True)
class Metric:
    n: int
    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.shape != (self.n, self.n):
            raise ValueError(f"distance matrix must be {self.n}x{self.n}, got {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)


def sample_edge_weights(n: int, rng: np.random.Generator) -> EdgeWeights:
    """Draw ``n(n-1)/2`` i.i.d. Exp(1) weights as ``-ln(U)`` with U in (0, 1]."""
    if n < 2:
        raise ValueError(f"need n >= 2 vertices, got {n}")
    m = n * (n - 1) // 2
    # Generator.random is on [0, 1); flip it onto (0, 1] so log never sees 0.
    u = 1.0 - rng.random(m)
    return EdgeWeights(n, -np.log(u))


def build_metric(weights: EdgeWeights) -> Metric:
    """Shortest-path metric of the weighted complete graph.

    One Dijkstra search per source. The two directed searches of a pair may
    sum the same path in a different order, so the result is symmetrised by
    taking the elementwise minimum with the transpose.
    """
    d = dijkstra(weights.matrix(), directed=False)
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return Metric(weights.n, d)


def validate_metric(m: Metric | np.ndarray, tol: float = 1e-9) -> list[dict]:
    """List every violated metric axiom.

    Returns a list of dicts with keys ``kind`` (``"diagonal"``, ``"symmetry"``
    or ``"triangle"``), ``pair`` (0-based vertex indices) and, for triangle
    violations, the intermediate vertex ``via``. An empty list means the
    matrix is a metric up to relative tolerance ``tol``.
    """
    d = np.asarray(m.d if isinstance(m, Metric) else m, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    n = d.shape[0]
    report: list[dict] = []
    for v in np.flatnonzero(np.diag(d) != 0.0):
        report.append({"kind": "diagonal", "pair": (int(v), int(v)), "value": float(d[v, v])})
    for u, v in zip(*np.nonzero(np.triu(d != d.T, k=1))):
        report.append({"kind": "symmetry", "pair": (int(u), int(v)),
                       "value": float(d[u, v]), "other": float(d[v, u])})
    for u in range(n):
        # best detour u -> s -> v over all s, for every v at once
        via = d[u][:, None] + d
        s = np.argmin(via, axis=0)
        best = via[s, np.arange(n)]
        bad = d[u] > best * (1.0 + tol)
        for v in np.flatnonzero(bad):
            if v <= u and d[v, u] == d[u, v]:
                continue
            report.append({"kind": "triangle", "pair": (int(u), int(v)), "via": int(s[v]),
                           "value": float(d[u, v]), "detour": float(best[v])})
    return report
