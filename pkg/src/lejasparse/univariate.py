"""Univariate Lagrange bases, hierarchical interpolation and quadrature weights."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .distributions import Distribution
from .leja import LejaSequence

GAUSS_POINTS = 64
QUAD_RTOL = 1e-12
MAX_PANELS = 2**10
LEBESGUE_PROBES = 10**4

_GL_X, _GL_W = leggauss(GAUSS_POINTS)


class QuadratureError(RuntimeError):
    pass


def standard_basis_eval(nodes, j: int, y):
    """Lagrange polynomial ``j`` on ``nodes`` (product form)."""
    nodes = np.asarray(nodes, dtype=float)
    if not 0 <= j < nodes.size:
        raise IndexError(f"basis index {j} out of range for {nodes.size} nodes")
    y = np.asarray(y, dtype=float)
    out = np.ones_like(y)
    for k, yk in enumerate(nodes):
        if k != j:
            out = out * ((y - yk) / (nodes[j] - yk))
    return float(out) if out.ndim == 0 else out


def hierarchical_basis_eval(nodes, i: int, y):
    """Hierarchical polynomial ``l_i``: one at node ``i``, zero at nodes ``k < i``."""
    nodes = np.asarray(nodes, dtype=float)
    if not 0 <= i < nodes.size:
        raise IndexError(f"level {i} out of range for {nodes.size} nodes")
    y = np.asarray(y, dtype=float)
    out = np.ones_like(y)
    for k in range(i):
        out = out * ((y - nodes[k]) / (nodes[i] - nodes[k]))
    return float(out) if out.ndim == 0 else out


def hierarchical_basis_matrix(nodes, y, window=None) -> np.ndarray:
    """All hierarchical polynomials on ``nodes`` evaluated at ``y``.

    Returns an array of shape ``(len(y), len(nodes))``. Abscissae are mapped
    affinely from ``window`` (default: the node hull) onto [-1, 1] first so
    the running numerator products stay in range for wide supports; the
    ratios are invariant under that map. Entry ``[b, a]`` at
    ``y = nodes[b]`` is exactly 0 for ``b < a`` and exactly 1 for ``b = a``.
    """
    nodes = np.asarray(nodes, dtype=float)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    lo, hi = (nodes.min(), nodes.max()) if window is None else window
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) if hi > lo else 1.0
    u = (y - center) / half
    un = (nodes - center) / half
    m = nodes.size
    num = np.ones((y.size, m))
    den = np.ones(m)
    for k in range(1, m):
        num[:, k] = num[:, k - 1] * (u - un[k - 1])
    for a in range(1, m):
        # same recursion as the numerator, evaluated at the node itself
        p = 1.0
        for k in range(a):
            p = p * (un[a] - un[k])
        den[a] = p
    return num / den


def surpluses_1d(nodes, values) -> np.ndarray:
    """Hierarchical surpluses from data at the nodes, in node order."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape != nodes.shape:
        raise ValueError(f"expected {nodes.size} values, got {values.size}")
    table = hierarchical_basis_matrix(nodes, nodes)  # table[b, a] = l_a(y_b)
    s = np.zeros_like(values)
    for b in range(nodes.size):
        s[b] = values[b] - table[b, :b] @ s[:b]
    return s


def interpolate_1d(nodes, values, y):
    """Degree ``len(nodes) - 1`` interpolant of ``values`` evaluated at ``y``."""
    s = surpluses_1d(nodes, values)
    y_arr = np.asarray(y, dtype=float)
    out = hierarchical_basis_matrix(nodes, y_arr.ravel()) @ s
    return float(out[0]) if y_arr.ndim == 0 else out.reshape(y_arr.shape)


def lagrange_interpolate(nodes, values, y):
    """Standard-form Lagrange interpolant, sum of ``values[j] * l_j(y)``."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    return sum(values[j] * standard_basis_eval(nodes, j, y) for j in range(nodes.size))


def expectation(dist: Distribution, f, rtol: float = QUAD_RTOL, max_panels: int = MAX_PANELS):
    """``E[f(Y)]`` over the effective support of ``dist``.

    ``f`` maps a 1-D array of abscissae to an array of shape ``(n,)`` or
    ``(n, m)``. Panels carry equal probability mass (their edges are CDF
    quantiles), each integrated with a 64-point Gauss-Legendre rule against
    the density; the panel count doubles until every component settles to
    ``rtol`` relative to the integral of ``|f|``.
    """
    lo, hi = dist.support()
    t_lo, t_hi = float(dist.cdf(lo)), float(dist.cdf(hi))
    mass = t_hi - t_lo
    prev = None
    panels = 1
    while True:
        t = np.linspace(t_lo, t_hi, panels + 1)
        edges = np.empty(panels + 1)
        edges[0], edges[-1] = lo, hi
        if panels > 1:
            edges[1:-1] = np.clip(dist._icdf(t[1:-1]), lo, hi)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        x = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        w = (half[:, None] * _GL_W[None, :]).ravel() * np.asarray(dist.pdf(x)) / mass
        fx = np.asarray(f(x), dtype=float)
        est = np.tensordot(w, fx, axes=(0, 0))
        scale = np.tensordot(w, np.abs(fx), axes=(0, 0))
        if prev is not None:
            err = np.abs(est - prev)
            if np.all(err <= rtol * np.maximum(scale, np.finfo(float).tiny)):
                return est
        if panels >= max_panels:
            worst = float(np.max(np.abs(est - prev) / np.maximum(scale, np.finfo(float).tiny)))
            raise QuadratureError(
                f"expectation under {dist} did not converge with {panels} panels "
                f"(worst relative change {worst:.3e})"
            )
        prev = est
        panels *= 2


@dataclass
class UnivariateRule:
    """Hierarchical interpolation rule on a Leja sequence with cached weights."""

    seq: LejaSequence
    max_level: int
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_level < 0:
            raise ValueError("max_level must be non-negative")
        self.seq = self.seq.extended(self.max_level + 1)
        self.weights = np.asarray(hierarchical_weights(self.nodes, self.seq.dist))

    @property
    def nodes(self) -> np.ndarray:
        return self.seq.array[: self.max_level + 1]

    def basis(self, y) -> np.ndarray:
        return hierarchical_basis_matrix(self.nodes, y, self.seq.dist.support())

    def interpolate(self, level: int, values, y):
        if len(values) != level + 1:
            raise ValueError(f"level {level} needs {level + 1} values, got {len(values)}")
        return interpolate_1d(self.nodes[: level + 1], values, y)

    def quadrature_weight(self, level: int) -> float:
        return float(self.weights[level])


def hierarchical_weights(nodes, dist: Distribution) -> np.ndarray:
    """``E[l_i]`` for every hierarchical polynomial on ``nodes``; ``E[l_0] = 1``."""
    nodes = np.asarray(nodes, dtype=float)
    window = dist.support()
    w = np.atleast_1d(expectation(dist, lambda x: hierarchical_basis_matrix(nodes, x, window)))
    w[0] = 1.0
    return w


def standard_weights(nodes, dist: Distribution) -> np.ndarray:
    """``E[l_j]`` for the standard Lagrange basis on ``nodes``."""
    nodes = np.asarray(nodes, dtype=float)

    def f(x):
        return np.stack([standard_basis_eval(nodes, j, x) for j in range(nodes.size)], axis=1)

    return np.atleast_1d(expectation(dist, f))


def quadrature_weight(rule: UnivariateRule, level: int) -> float:
    return rule.quadrature_weight(level)


def lebesgue_constant(nodes, probe_count: int = LEBESGUE_PROBES) -> float:
    """Lower estimate of the Lebesgue constant of ``nodes``.

    Maximum of the Lebesgue function over an equispaced grid across the node
    hull plus all midpoints between adjacent nodes, evaluated with the
    barycentric form.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size == 1:
        return 1.0
    lo, hi = nodes.min(), nodes.max()
    srt = np.sort(nodes)
    y = np.concatenate((np.linspace(lo, hi, probe_count), 0.5 * (srt[1:] + srt[:-1])))
    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    x = (nodes - center) / half
    u = (y - center) / half
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    bw = 1.0 / np.prod(diff, axis=1)
    d = u[:, None] - x[None, :]
    hit = d == 0.0
    d[hit] = 1.0
    terms = bw[None, :] / d
    lam = np.abs(terms).sum(axis=1) / np.abs(terms.sum(axis=1))
    lam[hit.any(axis=1)] = 1.0
    return float(lam.max())
