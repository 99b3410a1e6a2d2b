"""Sparse hierarchical interpolation on weighted Leja grids.

A surrogate is a sum of hierarchical surpluses times tensorized hierarchical
Lagrange polynomials over a downward-closed multi-index set. With one new
Leja node per level, every multi-index owns exactly one grid node, so the
number of model evaluations equals the number of multi-indices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .distributions import Distribution, from_record
from .leja import LejaSequence, weighted_leja
from .multiindex import (
    MultiIndex,
    MultiIndexSet,
    admissible_set,
    is_downward_closed,
    linear_extension,
)
from .univariate import hierarchical_basis_matrix, hierarchical_weights

Model = Callable[[np.ndarray], np.ndarray]

EVAL_CHUNK = 2048
FORMAT = "lejasparse-surrogate"


class BuildError(RuntimeError):
    """Model evaluation failed during a build.

    ``report`` holds the progress made before the failure and ``nodes`` the
    input points of the failing batch.
    """

    def __init__(self, message: str, report: BuildReport, nodes: np.ndarray | None = None):
        super().__init__(message)
        self.report = report
        self.nodes = nodes


@dataclass
class BuildReport:
    iterations: int = 0
    final_eta_tot: float = math.nan
    termination_reason: str | None = None
    # (accepted index, its indicator, cost at the check that accepted it)
    log: list[tuple[MultiIndex, float, int]] = field(default_factory=list)


def pointwise(f: Callable[[np.ndarray], float]) -> Model:
    """Lift a function of one input vector to the batched model interface."""

    def model(y: np.ndarray) -> np.ndarray:
        return np.array([f(row) for row in np.atleast_2d(y)], dtype=float)

    return model


class SparseSurrogate:
    """Immutable sparse interpolant ``sum_i s_i L_i(y)``.

    ``indices`` are stored in the order they were evaluated, which is a
    linear extension of the componentwise order.
    """

    def __init__(
        self,
        seqs: Sequence[LejaSequence],
        indices: Iterable[Iterable[int]],
        surpluses: Iterable[float],
        values: Iterable[float],
    ):
        self.seqs = tuple(seqs)
        self.dists: tuple[Distribution, ...] = tuple(s.dist for s in self.seqs)
        self.accepted = MultiIndexSet(len(self.seqs), indices)
        self._idx = np.array(list(self.accepted), dtype=np.intp).reshape(len(self.accepted), self.dim)
        self._s = np.asarray(list(surpluses), dtype=float)
        self._values = np.asarray(list(values), dtype=float)
        if not (self._s.size == self._values.size == len(self.accepted)):
            raise ValueError("surpluses and values must align with the indices")
        if len(self.accepted) == 0:
            raise ValueError("a surrogate needs at least one multi-index")
        self._max_level = self._idx.max(axis=0)
        self.seqs = tuple(s.extended(int(m) + 1) for s, m in zip(self.seqs, self._max_level))
        self._nodes = [s.array[: int(m) + 1] for s, m in zip(self.seqs, self._max_level)]
        self._windows = [d.support() for d in self.dists]
        self._weights: list[np.ndarray] | None = None

    @property
    def dim(self) -> int:
        return len(self.seqs)

    @property
    def eval_count(self) -> int:
        return len(self.accepted)

    @property
    def indices(self) -> np.ndarray:
        return self._idx.copy()

    @property
    def surpluses(self) -> np.ndarray:
        return self._s.copy()

    @property
    def values(self) -> np.ndarray:
        return self._values.copy()

    def surplus(self, idx) -> float:
        return float(self._s[self.accepted.index(idx)])

    def node(self, idx) -> np.ndarray:
        return np.array([self._nodes[n][k] for n, k in enumerate(idx)])

    def grid(self) -> np.ndarray:
        """Grid node of every multi-index, shape ``(K, N)``."""
        return np.stack([self._nodes[n][self._idx[:, n]] for n in range(self.dim)], axis=1)

    def basis(self, idx, y) -> np.ndarray:
        """The tensorized hierarchical polynomial of ``idx`` at points ``y``."""
        y = np.atleast_2d(np.asarray(y, dtype=float))
        out = np.ones(y.shape[0])
        for n, level in enumerate(idx):
            if level > 0:
                nodes = self.seqs[n].array[: level + 1]
                out *= hierarchical_basis_matrix(nodes, y[:, n], self._windows[n])[:, level]
        return out

    def _check(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        flat = y.ndim == 1
        y = np.atleast_2d(y)
        if y.shape[1] != self.dim:
            raise ValueError(f"expected points of dimension {self.dim}, got shape {y.shape}")
        return y, flat

    def __call__(self, y) -> np.ndarray | float:
        y, flat = self._check(y)
        out = np.empty(y.shape[0])
        for start in range(0, y.shape[0], EVAL_CHUNK):
            out[start : start + EVAL_CHUNK] = self._evaluate(y[start : start + EVAL_CHUNK])
        return float(out[0]) if flat else out

    def _evaluate(self, y: np.ndarray) -> np.ndarray:
        terms = np.ones((y.shape[0], self._idx.shape[0]))
        for n in range(self.dim):
            active = self._idx[:, n] > 0
            if not active.any():
                continue
            b = hierarchical_basis_matrix(self._nodes[n], y[:, n], self._windows[n])
            terms[:, active] *= b[:, self._idx[active, n]]
        return terms @ self._s

    def outside_support(self, y) -> np.ndarray:
        """Mask of points that fall outside the product effective support."""
        y, _ = self._check(y)
        lo = np.array([w.lo for w in self._windows])
        hi = np.array([w.hi for w in self._windows])
        return np.any((y < lo) | (y > hi), axis=1)

    def quadrature_weights(self) -> list[np.ndarray]:
        """Per-dimension expectations of the hierarchical polynomials."""
        if self._weights is None:
            self._weights = [hierarchical_weights(nodes, d) for nodes, d in zip(self._nodes, self.dists)]
        return self._weights

    def mean(self) -> float:
        w = self.quadrature_weights()
        prod = np.ones(self._idx.shape[0])
        for n in range(self.dim):
            prod *= w[n][self._idx[:, n]]
        return float(prod @ self._s)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "version": 1,
            "dimension": self.dim,
            "distributions": [d.to_record() for d in self.dists],
            "kinds": [s.kind for s in self.seqs],
            "nodes": [nodes.tolist() for nodes in self._nodes],
            "indices": self._idx.tolist(),
            "surpluses": self._s.tolist(),
            "values": self._values.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> SparseSurrogate:
        if doc.get("format") != FORMAT:
            raise ValueError("not a serialized sparse surrogate")
        dim = int(doc["dimension"])
        dists = [from_record(r) for r in doc["distributions"]]
        kinds = doc.get("kinds", ["weighted"] * dim)
        if not (len(dists) == len(doc["nodes"]) == len(kinds) == dim):
            raise ValueError("per-dimension records do not match the dimension")
        seqs = [LejaSequence(d, tuple(n), k) for d, n, k in zip(dists, doc["nodes"], kinds)]
        return cls(seqs, doc["indices"], doc["surpluses"], doc["values"])

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    @classmethod
    def load(cls, path) -> SparseSurrogate:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def multivariate_basis_eval(surrogate: SparseSurrogate, idx, y) -> np.ndarray:
    return surrogate.basis(idx, y)


def surrogate_eval(surrogate: SparseSurrogate, y):
    return surrogate(y)


class _Dimension:
    """Leja nodes of one input plus ``table[a, b] = l_a(y_b)``."""

    def __init__(self, seq: LejaSequence):
        self.seq = seq
        self.window = seq.dist.support()
        self.table = np.ones((1, 1))

    def ensure(self, level: int) -> None:
        size = self.table.shape[0]
        if level < size:
            return
        new_size = max(level + 1, 2 * size)
        self.seq = self.seq.extended(new_size)
        nodes = self.seq.array[:new_size]
        self.table = hierarchical_basis_matrix(nodes, nodes, self.window).T


class _State:
    """Evaluated multi-indices with their nodes, values and surpluses."""

    def __init__(self, model: Model, seqs: Sequence[LejaSequence], report: BuildReport):
        self.model = model
        self.dims = [_Dimension(s) for s in seqs]
        self.report = report
        self.indices: list[MultiIndex] = []
        self._idx = np.zeros((0, len(seqs)), dtype=np.intp)
        self.surplus = np.zeros(0)
        self.values = np.zeros(0)

    @property
    def dim(self) -> int:
        return len(self.dims)

    def nodes_of(self, batch: Sequence[MultiIndex]) -> np.ndarray:
        for n, d in enumerate(self.dims):
            d.ensure(max(i[n] for i in batch))
        return np.array([[d.seq.nodes[i[n]] for n, d in enumerate(self.dims)] for i in batch])

    def evaluate(self, batch: Sequence[MultiIndex]) -> np.ndarray:
        """Evaluate the model on a batch of mutually incomparable indices.

        Each index's surplus only involves indices below it, all of which
        must already be stored, so the batch is an independent unit.
        """
        if not batch:
            return np.zeros(0)
        y = self.nodes_of(batch)
        try:
            g = np.asarray(self.model(y), dtype=float).reshape(len(batch))
        except Exception as exc:
            raise BuildError(f"model evaluation failed: {exc}", self.report, y) from exc
        if not np.all(np.isfinite(g)):
            bad = y[~np.isfinite(g)]
            raise BuildError(f"model returned non-finite values at {bad.tolist()}", self.report, bad)
        new = np.array(batch, dtype=np.intp).reshape(len(batch), self.dim)
        interp = np.zeros(len(batch))
        if self.indices:
            basis = np.ones((len(batch), len(self.indices)))
            for n, d in enumerate(self.dims):
                basis *= d.table[self._idx[None, :, n], new[:, None, n]]
            interp = basis @ self.surplus
        s = g - interp
        self.indices.extend(batch)
        self._idx = np.vstack([self._idx, new])
        self.surplus = np.concatenate([self.surplus, s])
        self.values = np.concatenate([self.values, g])
        return s

    def surrogate(self) -> SparseSurrogate:
        return SparseSurrogate([d.seq for d in self.dims], self.indices, self.surplus, self.values)


def hierarchical_surplus(state: _State, idx: MultiIndex) -> float:
    """Surplus of one admissible index against the stored interpolant."""
    return float(state.evaluate([tuple(idx)])[0])


def _default_seqs(dists: Sequence[Distribution]) -> list[LejaSequence]:
    return [weighted_leja(d, 1) for d in dists]


def _evaluate_set(state: _State, members: Iterable[MultiIndex]) -> None:
    # indices of equal total level are pairwise incomparable
    order = linear_extension(members)
    start = 0
    while start < len(order):
        total = sum(order[start])
        stop = start
        while stop < len(order) and sum(order[stop]) == total:
            stop += 1
        state.evaluate(order[start:stop])
        start = stop


def build_on_fixed_set(
    model: Model,
    dists: Sequence[Distribution],
    indices: MultiIndexSet,
    seqs: Sequence[LejaSequence] | None = None,
) -> SparseSurrogate:
    """Surrogate on a given downward-closed multi-index set."""
    if not is_downward_closed(indices):
        raise ValueError("multi-index set must be downward-closed")
    if indices.dim != len(dists):
        raise ValueError("multi-index dimension does not match the number of inputs")
    state = _State(model, seqs or _default_seqs(dists), BuildReport())
    _evaluate_set(state, indices)
    return state.surrogate()


def adaptive_build(
    model: Model,
    dists: Sequence[Distribution],
    budget: float | None = None,
    tolerance: float = 0.0,
    init: MultiIndexSet | None = None,
    seqs: Sequence[LejaSequence] | None = None,
    strict_budget: bool = False,
) -> tuple[SparseSurrogate, BuildReport]:
    """Dimension-adaptive sparse Leja interpolation.

    Each pass computes the cost ``C = #accepted + #admissible`` and the total
    indicator ``sum |s_i|`` over the admissible set, stops once ``C >= budget``
    or the total drops to ``tolerance`` or below, and otherwise accepts the
    admissible index with the largest ``|s_i|`` (lexicographically smallest
    among exact ties). The returned surrogate uses accepted and admissible
    indices alike. Admissible surpluses are computed once: accepting another
    index never changes them.

    With ``strict_budget`` a pass also stops when accepting would push the
    cost past ``budget``, so the evaluation count never exceeds the budget
    unless the initial set and its frontier already do.
    """
    n_dim = len(dists)
    if budget is None:
        budget = math.inf
    if not budget >= 1:
        raise ValueError(f"budget must be at least 1, got {budget}")
    if math.isinf(budget) and not tolerance > 0:
        raise ValueError("an unbounded build needs a positive tolerance")
    if init is None:
        init = MultiIndexSet(n_dim, [(0,) * n_dim])
    if init.dim != n_dim or len(init) == 0 or not is_downward_closed(init):
        raise ValueError("initial multi-index set must be non-empty, downward-closed and match the inputs")
    report = BuildReport()
    state = _State(model, seqs or _default_seqs(dists), report)

    accepted = init.copy()
    _evaluate_set(state, accepted)
    frontier = list(admissible_set(accepted))
    eta = dict(zip(frontier, np.abs(state.evaluate(frontier)).tolist()))

    while True:
        report.iterations += 1
        cost = len(accepted) + len(eta)
        eta_tot = math.fsum(eta.values())
        report.final_eta_tot = eta_tot
        if cost >= budget:
            report.termination_reason = "budget"
            break
        if eta_tot <= tolerance:
            report.termination_reason = "tolerance"
            break
        top = max(eta.values())
        best = min(i for i, v in eta.items() if v == top)
        new = accepted.newly_admissible(best)
        if strict_budget and cost + len(new) > budget:
            report.termination_reason = "budget"
            break
        accepted.add(best)
        del eta[best]
        report.log.append((best, top, cost))
        s_new = state.evaluate(new)
        eta.update(zip(new, np.abs(s_new).tolist()))

    return state.surrogate(), report
