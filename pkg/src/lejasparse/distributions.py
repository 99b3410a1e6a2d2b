"""Continuous univariate input laws.

Each law exposes its density, log-density, CDF, quantile and an effective
(finite) support used to bound node searches and quadrature. Laws are frozen
dataclasses; parameters are validated once at construction.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr, ndtri

TAIL_MASS = 1e-12
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class Interval(NamedTuple):
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _out(x):
    # 0-d results come back as plain floats
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_probability(p: np.ndarray) -> None:
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError("quantile level must lie strictly inside (0, 1)")


class Distribution:
    """Base class for the supported input laws."""

    def logpdf(self, y):
        raise NotImplementedError

    def pdf(self, y):
        return _out(np.exp(np.asarray(self.logpdf(y), dtype=float)))

    def cdf(self, y):
        raise NotImplementedError

    def icdf(self, p):
        p = np.asarray(p, dtype=float)
        _check_probability(p)
        return _out(self._icdf(p))

    def _icdf(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def support(self) -> Interval:
        raise NotImplementedError

    def mode(self) -> float:
        raise NotImplementedError

    def sample(self, u01):
        """Inverse-transform draw(s) from uniform variate(s) in (0, 1)."""
        return self.icdf(u01)

    def to_record(self) -> dict:
        return {"type": type(self).__name__, **asdict(self)}


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.b > self.a):
            raise ValueError(f"Uniform requires finite a < b, got a={self.a}, b={self.b}")

    def logpdf(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y >= self.a) & (y <= self.b)
        return _out(np.where(inside, -math.log(self.b - self.a), -np.inf))

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return _out(np.clip((y - self.a) / (self.b - self.a), 0.0, 1.0))

    def _icdf(self, p):
        return self.a + (self.b - self.a) * p

    def support(self) -> Interval:
        return Interval(float(self.a), float(self.b))

    def mode(self) -> float:
        # every point is a mode; the midpoint keeps sequences symmetric
        return 0.5 * (self.a + self.b)


@dataclass(frozen=True)
class Normal(Distribution):
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"Normal requires finite mu and sigma > 0, got {self}")

    def logpdf(self, y):
        z = (np.asarray(y, dtype=float) - self.mu) / self.sigma
        return _out(-0.5 * z * z - _LOG_SQRT_2PI - math.log(self.sigma))

    def cdf(self, y):
        return _out(ndtr((np.asarray(y, dtype=float) - self.mu) / self.sigma))

    def _icdf(self, p):
        return self.mu + self.sigma * ndtri(p)

    def support(self) -> Interval:
        half = -self.sigma * float(ndtri(TAIL_MASS))
        return Interval(self.mu - half, self.mu + half)

    def mode(self) -> float:
        return float(self.mu)


@dataclass(frozen=True)
class TruncatedNormal(Distribution):
    """Normal law N(mu, sigma^2) restricted to [l, u] and renormalized."""

    mu: float
    sigma: float
    l: float  # noqa: E741
    u: float

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"TruncatedNormal requires sigma > 0, got {self.sigma}")
        if not (math.isfinite(self.l) and math.isfinite(self.u) and self.u > self.l):
            raise ValueError(f"TruncatedNormal requires finite l < u, got l={self.l}, u={self.u}")
        alpha, beta = self._alpha, self._beta
        # measure the mass from the lighter tail to keep digits
        if alpha > 0:
            mass = float(ndtr(-alpha) - ndtr(-beta))
        else:
            mass = float(ndtr(beta) - ndtr(alpha))
        if not mass > 0:
            raise ValueError("truncation interval carries no probability mass")
        object.__setattr__(self, "_mass", mass)
        object.__setattr__(self, "_log_mass", math.log(mass))

    @property
    def _alpha(self) -> float:
        return (self.l - self.mu) / self.sigma

    @property
    def _beta(self) -> float:
        return (self.u - self.mu) / self.sigma

    @property
    def mass(self) -> float:
        """Parent-normal probability of [l, u]."""
        return self._mass

    def logpdf(self, y):
        y = np.asarray(y, dtype=float)
        z = (y - self.mu) / self.sigma
        val = -0.5 * z * z - _LOG_SQRT_2PI - math.log(self.sigma) - self._log_mass
        return _out(np.where((y >= self.l) & (y <= self.u), val, -np.inf))

    def cdf(self, y):
        z = (np.asarray(y, dtype=float) - self.mu) / self.sigma
        if self._alpha > 0:
            c = (ndtr(-self._alpha) - ndtr(-z)) / self._mass
        else:
            c = (ndtr(z) - ndtr(self._alpha)) / self._mass
        return _out(np.clip(c, 0.0, 1.0))

    def _icdf(self, p):
        if self._alpha > 0:
            z = -ndtri(ndtr(-self._alpha) - p * self._mass)
        else:
            z = ndtri(ndtr(self._alpha) + p * self._mass)
        return np.clip(self.mu + self.sigma * z, self.l, self.u)

    def support(self) -> Interval:
        return Interval(float(self.l), float(self.u))

    def mode(self) -> float:
        return float(min(max(self.mu, self.l), self.u))


@dataclass(frozen=True)
class Gumbel(Distribution):
    """Gumbel law for maxima with location ``loc`` and scale ``scale``."""

    loc: float
    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.loc) and self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError(f"Gumbel requires finite loc and scale > 0, got {self}")

    def logpdf(self, y):
        z = (np.asarray(y, dtype=float) - self.loc) / self.scale
        return _out(-math.log(self.scale) - z - np.exp(-z))

    def cdf(self, y):
        z = (np.asarray(y, dtype=float) - self.loc) / self.scale
        return _out(np.exp(-np.exp(-z)))

    def _icdf(self, p):
        return self.loc - self.scale * np.log(-np.log(p))

    def support(self) -> Interval:
        lo = self.loc - self.scale * math.log(-math.log(TAIL_MASS))
        hi = self.loc - self.scale * math.log(-math.log1p(-TAIL_MASS))
        return Interval(lo, hi)

    def mode(self) -> float:
        return float(self.loc)


_VARIANTS = {cls.__name__: cls for cls in (Uniform, Normal, TruncatedNormal, Gumbel)}


def from_record(record: dict) -> Distribution:
    """Build a law from a ``{"type": ..., <parameters>}`` record.

    Unknown types, missing parameters and unexpected keys are rejected.
    """
    record = dict(record)
    kind = record.pop("type", None)
    if kind not in _VARIANTS:
        raise ValueError(f"unknown distribution type {kind!r}; expected one of {sorted(_VARIANTS)}")
    cls = _VARIANTS[kind]
    names = {f.name for f in fields(cls)}
    extra = set(record) - names
    missing = names - set(record)
    if extra:
        raise ValueError(f"unexpected field(s) {sorted(extra)} for {kind}")
    if missing:
        raise ValueError(f"missing field(s) {sorted(missing)} for {kind}")
    return cls(**{k: float(v) for k, v in record.items()})


def support_mass(dist: Distribution) -> float:
    """Probability carried by the effective support."""
    lo, hi = dist.support()
    return float(dist.cdf(hi)) - float(dist.cdf(lo))


def truncated_from_uniform(a: float, b: float) -> TruncatedNormal:
    """Truncated normal with the mean and variance of U(a, b), cut at [a, b]."""
    return TruncatedNormal(mu=0.5 * (a + b), sigma=(b - a) / math.sqrt(12.0), l=a, u=b)
