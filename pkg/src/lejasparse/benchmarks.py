"""Closed-form benchmark models and their input laws.

* borehole: water flow through a borehole, 8 truncated-normal inputs
  ordered (r_w, r, T_u, H_u, T_l, H_l, L, K_w).
* steel-column: steel column limit state, inputs ordered
  (F_s, P_d, P_1, P_2, B, D, H, F_0, E, L); 7 truncated normals, 3 Gumbel.
* meromorphic: 1 / (1 + w.y) in 16 dimensions with half-truncated normals.

All evaluators take an array of shape ``(K, N)`` and return shape ``(K,)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import Distribution, Gumbel, TruncatedNormal, truncated_from_uniform

_EPS = np.finfo(float).eps


class ModelDomainError(ValueError):
    """Model evaluated outside its mathematical domain."""


def _columns(y, n: int) -> np.ndarray:
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if y.shape[1] != n:
        raise ValueError(f"expected {n} inputs per point, got shape {y.shape}")
    return y


def borehole(y) -> np.ndarray:
    """Borehole flow rate in m^3/yr."""
    y = _columns(y, 8)
    rw, r, tu, hu, tl, hl, length, kw = y.T
    if np.any(r <= rw) or np.any(rw <= 0):
        raise ModelDomainError("borehole needs r > r_w > 0")
    log_ratio = np.log(r / rw)
    denom = log_ratio * (1.0 + tu / tl + 2.0 * length * tu / (log_ratio * rw**2 * kw))
    if np.any(denom == 0):
        raise ModelDomainError("borehole denominator vanishes")
    return 2.0 * math.pi * tu * (hu - hl) / denom


def steel_column(y) -> np.ndarray:
    """Steel column limit state in MPa."""
    y = _columns(y, 10)
    fs, pd, p1, p2, b, d, h, f0, e, length = y.T
    pt = pd + p1 + p2
    eb = math.pi**2 * e * b * d * h**2 / (2.0 * length**2)
    gap = eb - pt
    if np.any(np.abs(gap) <= 4 * _EPS * np.maximum(np.abs(eb), np.abs(pt))):
        raise ModelDomainError("Euler buckling load equals the total load")
    return fs - pt * (1.0 / (2.0 * b * d) + f0 * eb / (b * d * h * gap))


def meromorphic_weights() -> np.ndarray:
    """Normalized weights: (1, .5, .1, .05, ..., 5e-8) / (2 * l1-norm)."""
    raw = np.array([(1.0 if k % 2 == 0 else 0.5) * 10.0 ** (-(k // 2)) for k in range(16)])
    return raw / (2.0 * raw.sum())


_MERO_W = meromorphic_weights()


def meromorphic(y) -> np.ndarray:
    y = _columns(y, 16)
    denom = 1.0 + y @ _MERO_W
    if np.any(np.abs(denom) <= 4 * _EPS):
        raise ModelDomainError("meromorphic function evaluated at its pole")
    return 1.0 / denom


def borehole_dists() -> list[Distribution]:
    mu_ln, sigma_ln = 7.71, 1.0056
    r_mean = math.exp(mu_ln + sigma_ln**2 / 2.0)
    r_var = (math.exp(sigma_ln**2) - 1.0) * math.exp(2.0 * mu_ln + sigma_ln**2)
    return [
        TruncatedNormal(mu=0.1, sigma=0.016182, l=0.05, u=0.15),
        TruncatedNormal(mu=r_mean, sigma=math.sqrt(r_var), l=100.0, u=50000.0),
        truncated_from_uniform(63070.0, 115600.0),
        truncated_from_uniform(990.0, 1110.0),
        truncated_from_uniform(63.1, 116.0),
        truncated_from_uniform(700.0, 820.0),
        truncated_from_uniform(1120.0, 1680.0),
        truncated_from_uniform(9855.0, 12045.0),
    ]


def steel_column_dists() -> list[Distribution]:
    return [
        TruncatedNormal(mu=400.0, sigma=35.0, l=295.0, u=505.0),
        TruncatedNormal(mu=500000.0, sigma=50000.0, l=350000.0, u=650000.0),
        Gumbel(loc=559495.0, scale=70173.0),
        Gumbel(loc=559495.0, scale=70173.0),
        TruncatedNormal(mu=300.0, sigma=3.0, l=291.0, u=309.0),
        TruncatedNormal(mu=20.0, sigma=2.0, l=14.0, u=26.0),
        TruncatedNormal(mu=300.0, sigma=5.0, l=285.0, u=315.0),
        TruncatedNormal(mu=30.0, sigma=10.0, l=0.0, u=60.0),
        Gumbel(loc=208110.0, scale=3275.0),
        TruncatedNormal(mu=7500.0, sigma=7.5, l=7470.0, u=7530.0),
    ]


def meromorphic_dists() -> list[Distribution]:
    upper = TruncatedNormal(mu=0.0, sigma=1.0, l=0.0, u=3.0)
    lower = TruncatedNormal(mu=0.0, sigma=1.0, l=-3.0, u=0.0)
    # first, third, ... inputs are the upper halves
    return [upper if n % 2 == 0 else lower for n in range(16)]


@dataclass(frozen=True)
class BenchmarkModel:
    name: str
    dists: tuple[Distribution, ...]
    evaluator: Callable[[np.ndarray], np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.dists)

    def __call__(self, y) -> np.ndarray:
        return self.evaluator(y)


_REGISTRY = {
    "borehole": (borehole, borehole_dists),
    "steel-column": (steel_column, steel_column_dists),
    "meromorphic": (meromorphic, meromorphic_dists),
}

NAMES = tuple(_REGISTRY)


def benchmark_spec(name: str) -> BenchmarkModel:
    try:
        evaluator, dists = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown benchmark {name!r}; choose from {', '.join(NAMES)}") from None
    return BenchmarkModel(name, tuple(dists()), evaluator)
