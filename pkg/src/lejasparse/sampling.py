"""Sobol and pseudo-random point streams, and reference means."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .distributions import Distribution

BITS = 30
MAX_DIM = 16
CHUNK = 2**16

# Joe & Kuo primitive polynomials and initial direction numbers for
# dimensions 2..16 as (degree s, coefficient a, m_1..m_s).
_JOE_KUO = (
    (1, 0, (1,)),
    (2, 1, (1, 3)),
    (3, 1, (1, 3, 1)),
    (3, 2, (1, 1, 1)),
    (4, 1, (1, 1, 3, 3)),
    (4, 4, (1, 3, 5, 13)),
    (5, 2, (1, 1, 5, 5, 17)),
    (5, 4, (1, 1, 5, 5, 5)),
    (5, 7, (1, 1, 7, 11, 19)),
    (5, 11, (1, 1, 5, 1, 1)),
    (5, 13, (1, 1, 1, 3, 11)),
    (5, 14, (1, 3, 5, 5, 31)),
    (6, 1, (1, 3, 3, 9, 7, 49)),
    (6, 13, (1, 1, 1, 15, 21, 21)),
    (6, 16, (1, 3, 1, 13, 27, 49)),
)


class UnsupportedDimensionError(ValueError):
    pass


def direction_numbers(dim: int) -> np.ndarray:
    """Integer direction numbers ``V[d, k]`` scaled to ``BITS`` bits."""
    if not 1 <= dim <= MAX_DIM:
        raise UnsupportedDimensionError(f"Sobol points support 1..{MAX_DIM} dimensions, got {dim}")
    v = np.zeros((dim, BITS), dtype=np.int64)
    v[0] = [1 << (BITS - 1 - k) for k in range(BITS)]
    for d in range(1, dim):
        s, a, m = _JOE_KUO[d - 1]
        row = [0] * BITS
        for k in range(min(s, BITS)):
            row[k] = m[k] << (BITS - 1 - k)
        for k in range(s, BITS):
            val = row[k - s] ^ (row[k - s] >> s)
            for r in range(1, s):
                if (a >> (s - 1 - r)) & 1:
                    val ^= row[k - r]
            row[k] = val
        v[d] = row
    return v


def _trailing_zeros(k: np.ndarray) -> np.ndarray:
    low = k & -k
    return np.log2(low.astype(float)).astype(np.intp)


def sobol_points(dim: int, count: int, skip: int = 1) -> np.ndarray:
    """Points ``skip .. skip + count - 1`` of the unscrambled Sobol sequence.

    Gray-code ordering; with the default ``skip=1`` the origin is dropped and
    all points lie strictly inside the unit cube.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if skip < 0 or skip + count > 2**BITS:
        raise ValueError("requested Sobol indices exceed the generator period")
    v = direction_numbers(dim)
    g = skip ^ (skip >> 1)
    # state of point `skip`
    state = np.zeros(dim, dtype=np.int64)
    for b in range(BITS):
        if (g >> b) & 1:
            state ^= v[:, b]
    out = np.empty((count, dim))
    out[0] = state
    if count > 1:
        ks = np.arange(skip + 1, skip + count, dtype=np.int64)
        steps = v[:, _trailing_zeros(ks)].T
        steps[0] ^= state
        out[1:] = np.bitwise_xor.accumulate(steps, axis=0)
    return out / float(2**BITS)


@dataclass
class PointStream:
    """Deterministic cursor over Sobol or seeded pseudo-random points."""

    kind: Literal["sobol", "pseudo-random"]
    dim: int
    seed: int | None = None
    cursor: int = 0
    _rng: np.random.Generator | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("sobol", "pseudo-random"):
            raise ValueError(f"unknown stream kind {self.kind!r}")
        if self.kind == "sobol":
            direction_numbers(self.dim)
        else:
            self._rng = np.random.default_rng(self.seed)
            if self.cursor:
                self._rng.integers(0, 2**53, size=(self.cursor, self.dim))

    def draw(self, count: int) -> np.ndarray:
        if self.kind == "sobol":
            pts = sobol_points(self.dim, count, skip=1 + self.cursor)
        else:
            # (k + 0.5) / 2^53 keeps every coordinate strictly inside (0, 1)
            k = self._rng.integers(0, 2**53, size=(count, self.dim))
            pts = (k + 0.5) / 2.0**53
        self.cursor += count
        return pts


def map_to_inputs(u: np.ndarray, dists: Sequence[Distribution]) -> np.ndarray:
    """Inverse-transform unit-cube points to the product input law."""
    u = np.atleast_2d(u)
    if u.shape[1] != len(dists):
        raise ValueError("points and distributions disagree on the dimension")
    return np.column_stack([d.icdf(u[:, n]) for n, d in enumerate(dists)])


def sample_inputs(dists: Sequence[Distribution], count: int, seed: int) -> np.ndarray:
    return map_to_inputs(PointStream("pseudo-random", len(dists), seed).draw(count), dists)


class ModelFailure(ValueError):
    """Model raised while computing a reference statistic; ``point`` is the culprit."""

    def __init__(self, message: str, point: np.ndarray | None):
        where = "" if point is None else f" at {point.tolist()}"
        super().__init__(f"model evaluation failed{where}: {message}")
        self.point = point


def _first_failure(model, y: np.ndarray) -> np.ndarray | None:
    # re-run point by point to name the offending input
    for row in y:
        try:
            model(row[None, :])
        except Exception:
            return row
    return None


def mc_reference_mean(
    model: Callable[[np.ndarray], np.ndarray],
    dists: Sequence[Distribution],
    count: int,
    stream: PointStream,
    chunk: int = CHUNK,
) -> tuple[float, float]:
    """Sample mean of ``model`` over ``count`` stream points and its standard error."""
    if count < 1:
        raise ValueError("count must be positive")
    sums, sq = [], []
    shift = None
    done = 0
    while done < count:
        n = min(chunk, count - done)
        y = map_to_inputs(stream.draw(n), dists)
        try:
            g = np.asarray(model(y), dtype=float)
        except Exception as exc:
            raise ModelFailure(str(exc), _first_failure(model, y)) from exc
        if not np.all(np.isfinite(g)):
            bad = y[~np.isfinite(g)][0]
            raise ValueError(f"model returned a non-finite value at {bad.tolist()}")
        if shift is None:
            shift = float(g[0])  # shifted sums keep the variance accurate
        sums.append(float(np.sum(g - shift)))
        sq.append(float(np.sum((g - shift) ** 2)))
        done += n
    mean_shifted = math.fsum(sums) / count
    var = max(math.fsum(sq) / count - mean_shifted**2, 0.0)
    stderr = math.sqrt(var / max(count - 1, 1)) if count > 1 else math.nan
    return shift + mean_shifted, stderr
