"""Moments of a surrogate and the two error metrics used in experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .sampling import PointStream, map_to_inputs
from .sparse import SparseSurrogate

CV_SAMPLE_SIZE = 10**5
CHUNK = 2**16


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    method: Literal["direct-quadrature", "surrogate-sampling"]
    sample_size: int | None = None
    stderr: float | None = None


@dataclass(frozen=True)
class ErrorReport:
    eps_cv_rms: float
    eps_rel_mean: float
    Q: int
    reference_mean: float


def mean_direct(surrogate: SparseSurrogate) -> MomentEstimate:
    """Mean from the product quadrature weights of the hierarchical basis."""
    return MomentEstimate(surrogate.mean(), "direct-quadrature")


def _functional(phi: str) -> tuple[Callable[[np.ndarray], np.ndarray], bool]:
    if phi in ("mean", "variance"):
        return (lambda v: v), phi == "variance"
    if phi.startswith("raw-"):
        try:
            k = int(phi[4:])
        except ValueError:
            k = -1
        if k >= 1:
            return (lambda v: v**k), False
    raise ValueError(f"unknown functional {phi!r}; use mean, variance or raw-<k>")


def moment_sampled(
    surrogate: SparseSurrogate,
    phi: str,
    sampler: PointStream,
    Q: int,
) -> MomentEstimate:
    """Sampling estimate of a moment of the surrogate.

    Parameters
    ----------
    phi
        ``"mean"``, ``"variance"`` (unbiased sample variance) or ``"raw-k"``
        for the k-th raw moment.
    sampler
        Unit-cube point stream, mapped to the inputs by inverse transform.
    Q
        Number of surrogate evaluations.
    """
    if Q < 1:
        raise ValueError("Q must be positive")
    f, central = _functional(phi)
    vals = np.empty(Q)
    done = 0
    while done < Q:
        n = min(CHUNK, Q - done)
        vals[done : done + n] = f(surrogate(map_to_inputs(sampler.draw(n), surrogate.dists)))
        done += n
    if central:
        value = float(np.var(vals, ddof=1)) if Q > 1 else 0.0
        return MomentEstimate(value, "surrogate-sampling", Q)
    value = math.fsum(vals) / Q
    stderr = float(np.std(vals, ddof=1) / math.sqrt(Q)) if Q > 1 else math.nan
    return MomentEstimate(value, "surrogate-sampling", Q, stderr)


def rms_cv_error(surrogate, model, sample) -> float:
    """Root-mean-square deviation between surrogate and model over ``sample``.

    ``model`` may be a callable or the precomputed model outputs at
    ``sample``.
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[0] == 0:
        raise ValueError("cross-validation sample is empty")
    truth = np.asarray(model(sample) if callable(model) else model, dtype=float)
    diff = np.asarray(surrogate(sample), dtype=float) - truth
    return math.sqrt(math.fsum(diff * diff) / diff.size)


def rel_mean_error(estimate: float, reference: float) -> float:
    if reference == 0:
        raise ZeroDivisionError("relative mean error is undefined for a zero reference")
    return abs(reference - estimate) / abs(reference)


def error_report(surrogate: SparseSurrogate, sample, truth, reference_mean: float) -> ErrorReport:
    return ErrorReport(
        eps_cv_rms=rms_cv_error(surrogate, truth, sample),
        eps_rel_mean=rel_mean_error(surrogate.mean(), reference_mean),
        Q=len(sample),
        reference_mean=reference_mean,
    )
