"""Nested Leja node sequences: unweighted, symmetric and density-weighted.

Every new node maximizes a log-objective of the form

    w(y) + sum_k log|y - y_k|

with ``w = 0.5 * log pdf`` for weighted sequences and ``w = 0`` on [-1, 1]
otherwise. The maximization scans a fixed candidate grid (equispaced in CDF
space, merged with an equispaced grid over the support), refines every grid
local maximum by golden-section search and resolves near-ties towards the
smallest node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .distributions import Distribution, Uniform

Kind = Literal["unweighted", "symmetric", "weighted"]
KINDS = ("unweighted", "symmetric", "weighted")

CDF_GRID_SIZE = 2**16 + 1
SUPPORT_GRID_SIZE = 2**12 + 1
REFINE_RTOL = 1e-13
TIE_RTOL = 1e-12

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_UNIT = Uniform(-1.0, 1.0)


class LejaConstructionError(RuntimeError):
    """No admissible candidate with a finite objective was found."""


@dataclass(frozen=True)
class LejaSequence:
    """An ordered, nested node sequence for one input law.

    ``objectives[j]`` is the log-objective value at which node ``j`` was
    selected (``nan`` for seeds that were not selected by the search).
    """

    dist: Distribution
    nodes: tuple[float, ...]
    kind: Kind = "weighted"
    objectives: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown Leja kind {self.kind!r}")
        if len(self.nodes) == 0:
            raise ValueError("a Leja sequence needs at least one node")
        object.__setattr__(self, "nodes", tuple(float(v) for v in self.nodes))
        if self.objectives is None:
            object.__setattr__(self, "objectives", (math.nan,) * len(self.nodes))
        elif len(self.objectives) != len(self.nodes):
            raise ValueError("objectives must align with nodes")

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.nodes)

    def extended(self, count: int) -> LejaSequence:
        """Sequence with at least ``count`` nodes; existing nodes are kept."""
        if count <= len(self.nodes):
            return self
        nodes, objs = _extend(self.dist, self.kind, self.nodes, self.objectives, count)
        return LejaSequence(self.dist, nodes, self.kind, objs)

    def grid(self, level: int) -> np.ndarray:
        """The level-``level`` grid, i.e. the first ``level + 1`` nodes."""
        if level < 0:
            raise ValueError("level must be non-negative")
        return self.extended(level + 1).array[: level + 1]


def extend_weighted_leja(seq: LejaSequence) -> LejaSequence:
    """Append one weighted Leja node to ``seq``."""
    if seq.kind != "weighted":
        raise ValueError("extend_weighted_leja requires a weighted sequence")
    return seq.extended(len(seq) + 1)


def weighted_leja(dist: Distribution, count: int, y0: float | None = None) -> LejaSequence:
    """The first ``count`` weighted Leja nodes; ``y0`` defaults to the mode."""
    if count < 1:
        raise ValueError("count must be positive")
    if y0 is None:
        y0 = dist.mode()
    lo, hi = dist.support()
    if not lo <= y0 <= hi:
        raise ValueError(f"initial node {y0} outside the support [{lo}, {hi}]")
    return LejaSequence(dist, (y0,), "weighted", (float(0.5 * dist.logpdf(y0)),)).extended(count)


def unweighted_leja(count: int, y0: float = 1.0) -> LejaSequence:
    """Classical Leja nodes on [-1, 1] for a constant weight."""
    if count < 1:
        raise ValueError("count must be positive")
    if not -1.0 <= y0 <= 1.0:
        raise ValueError(f"initial node {y0} outside [-1, 1]")
    return LejaSequence(_UNIT, (y0,), "unweighted", (0.0,)).extended(count)


def symmetric_leja(count: int) -> LejaSequence:
    """Symmetric Leja nodes on [-1, 1]: 0, 1, then argmax / negation pairs."""
    if count < 1:
        raise ValueError("count must be positive")
    seed = (0.0, 1.0)[:count]
    objs = (0.0, 0.0)[:count]
    return LejaSequence(_UNIT, seed, "symmetric", objs).extended(count)


def leja_grid(seq: LejaSequence, level: int) -> np.ndarray:
    return seq.grid(level)


# -- search machinery ---------------------------------------------------------


class _Search:
    """Candidate grid plus the running sum of log-distances to chosen nodes."""

    def __init__(self, dist: Distribution, kind: str):
        self.dist = dist
        self.kind = kind
        lo, hi = dist.support()
        self.lo, self.hi = lo, hi
        t = np.linspace(float(dist.cdf(lo)), float(dist.cdf(hi)), CDF_GRID_SIZE)
        with np.errstate(all="ignore"):
            y_cdf = np.clip(dist._icdf(t[1:-1]), lo, hi)
        y = np.concatenate(([lo], y_cdf, [hi], np.linspace(lo, hi, SUPPORT_GRID_SIZE)))
        self.grid = np.unique(y)
        self.weight = self._weight(self.grid)
        self.acc = np.zeros_like(self.grid)
        self.nodes: list[float] = []

    def _weight(self, y: np.ndarray) -> np.ndarray:
        if self.kind == "weighted":
            return 0.5 * np.asarray(self.dist.logpdf(y), dtype=float)
        return np.zeros_like(y)

    def objective(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if not self.nodes:
            return self._weight(y)
        with np.errstate(divide="ignore"):
            dist = np.log(np.abs(y[:, None] - np.array(self.nodes)[None, :]))
        return dist.sum(axis=1) + self._weight(y)

    def push(self, node: float) -> None:
        with np.errstate(divide="ignore"):
            self.acc += np.log(np.abs(self.grid - node))
        self.nodes.append(node)

    def argmax(self) -> tuple[float, float]:
        obj = self.acc + self.weight
        obj = np.where(np.isfinite(obj), obj, -np.inf)
        n = obj.size
        left = np.concatenate(([-np.inf], obj[:-1]))
        right = np.concatenate((obj[1:], [-np.inf]))
        peaks = np.flatnonzero((obj >= left) & (obj >= right) & np.isfinite(obj))
        if peaks.size == 0:
            raise LejaConstructionError(
                f"no finite Leja objective for {self.dist} after {len(self.nodes)} nodes"
            )
        a = self.grid[np.maximum(peaks - 1, 0)]
        b = self.grid[np.minimum(peaks + 1, n - 1)]
        ref_y = _golden_max(self.objective, a, b, REFINE_RTOL * (self.hi - self.lo))
        ref_f = self.objective(ref_y)
        grid_y = self.grid[peaks]
        grid_f = self.objective(grid_y)
        take_grid = ~(ref_f > grid_f)
        cand_y = np.where(take_grid, grid_y, ref_y)
        cand_f = np.where(take_grid, grid_f, ref_f)
        best = np.max(cand_f)
        if not np.isfinite(best):
            raise LejaConstructionError(f"degenerate density {self.dist}")
        ties = cand_f >= best - TIE_RTOL * max(1.0, abs(best))
        j = np.flatnonzero(ties)[np.argmin(cand_y[ties])]
        return float(cand_y[j]), float(cand_f[j])


def _golden_max(f, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Vectorized golden-section maximization on the brackets [a, b]."""
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if np.max(b - a) <= tol:
            break
        move_right = fc < fd
        a = np.where(move_right, c, a)
        b = np.where(move_right, b, d)
        c_new = np.where(move_right, d, b - _INVPHI * (b - a))
        d_new = np.where(move_right, a + _INVPHI * (b - a), c)
        fc_new = np.where(move_right, fd, np.nan)
        fd_new = np.where(move_right, np.nan, fc)
        need_c = ~move_right
        need_d = move_right
        if need_c.any():
            fc_new[need_c] = f(c_new[need_c])
        if need_d.any():
            fd_new[need_d] = f(d_new[need_d])
        c, d, fc, fd = c_new, d_new, fc_new, fd_new
    return 0.5 * (a + b)


# Longest sequence computed so far per (dist, kind, first node); later requests
# for a prefix of a cached sequence are served from here.
_CACHE: dict[tuple, tuple[_Search, list[float]]] = {}


def _new_state(dist: Distribution, kind: str, seeds: Sequence[float]) -> _Search:
    search = _Search(dist, kind)
    for v in seeds:
        search.push(float(v))
    return search


def _step(search: _Search, kind: str) -> tuple[float, float]:
    j = len(search.nodes)
    if kind == "symmetric" and j >= 2 and j % 2 == 0:
        y = -search.nodes[-1]
        return y, float(search.objective(np.array([y]))[0])
    return search.argmax()


def _extend(dist, kind, nodes, objectives, count):
    n_seed = 2 if kind == "symmetric" else 1
    key = (dist, kind, tuple(nodes[:n_seed]))
    entry = _CACHE.get(key)
    if entry is not None and tuple(entry[0].nodes[: len(nodes)]) == tuple(nodes):
        grown_nodes, grown_objs = _grow(entry, kind, count)
        # the caller's own objective record wins for the nodes it supplied
        return grown_nodes, tuple(objectives) + grown_objs[len(nodes):]
    entry = (_new_state(dist, kind, nodes), list(objectives))
    if len(nodes) <= n_seed and key not in _CACHE:
        _CACHE[key] = entry
    return _grow(entry, kind, count)


def _grow(entry, kind, count):
    search, objs = entry
    while len(search.nodes) < count:
        y, f = _step(search, kind)
        search.push(y)
        objs.append(f)
    return tuple(search.nodes[:count]), tuple(objs[:count])


def clear_cache() -> None:
    _CACHE.clear()
