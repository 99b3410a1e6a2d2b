import math

import numpy as np
import pytest
from scipy import integrate

from lejasparse.benchmarks import (
    ModelDomainError,
    NAMES,
    benchmark_spec,
    borehole,
    meromorphic,
    meromorphic_weights,
    steel_column,
)
from lejasparse.distributions import Gumbel, TruncatedNormal
from lejasparse.sampling import sample_inputs

STEEL_POINT = [400, 5e5, 5e5, 5e5, 300, 20, 300, 30, 2.1e5, 7500]
# frozen from a scalar evaluation of the limit state with plain floats
STEEL_VALUE = 245.56137442208663


def test_borehole_reference_point():
    val = borehole([[0.1, 1000, 100, 1000, 100, 700, 1000, 10000]])[0]
    # hand evaluation: 2 pi 100 300 / (ln 1e4 (1 + 1 + 2e5 / (ln 1e4 100)))
    ln = math.log(1e4)
    hand = 2 * math.pi * 100 * 300 / (ln * (2 + 2e5 / (ln * 100)))
    assert val == pytest.approx(hand, rel=1e-14)
    assert round(val, 2) == 93.39


def test_borehole_equal_heads_give_zero():
    y = sample_inputs(benchmark_spec("borehole").dists, 20, seed=5)
    y[:, 5] = y[:, 3]
    assert np.all(borehole(y) == 0)


def test_borehole_domain_errors():
    with pytest.raises(ModelDomainError):
        borehole([[0.1, 0.05, 100, 1000, 100, 700, 1000, 10000]])
    with pytest.raises(ModelDomainError):
        borehole([[0.0, 10, 100, 1000, 100, 700, 1000, 10000]])
    with pytest.raises(ValueError):
        borehole([[1.0, 2.0]])


def test_borehole_head_monotonicity():
    bm = benchmark_spec("borehole")
    y = sample_inputs(bm.dists, 100, seed=9)
    h = 1e-3
    up, down = y.copy(), y.copy()
    up[:, 3] += h
    down[:, 5] += h
    assert np.all(borehole(up) > borehole(y))
    assert np.all(borehole(down) < borehole(y))


def test_steel_column_reference_point():
    assert steel_column([STEEL_POINT])[0] == pytest.approx(STEEL_VALUE, rel=1e-13)


def test_steel_column_zero_load():
    p = list(STEEL_POINT)
    p[1] = p[2] = p[3] = 0.0
    assert steel_column([p])[0] == 400.0


def test_steel_column_singularity():
    p = np.array(STEEL_POINT, dtype=float)
    eb = math.pi**2 * p[8] * p[4] * p[5] * p[6] ** 2 / (2 * p[9] ** 2)
    p[1], p[2], p[3] = eb, 0.0, 0.0
    with pytest.raises(ModelDomainError):
        steel_column([p])


def test_meromorphic_values():
    assert meromorphic(np.ones((1, 16)))[0] == pytest.approx(2 / 3, abs=1e-12)
    assert meromorphic(np.zeros((1, 16)))[0] == 1.0


def test_meromorphic_weight_pattern():
    raw = np.array([1, 0.5, 0.1, 0.05, 0.01, 0.005, 1e-3, 5e-4, 1e-4, 5e-5, 1e-5, 5e-6, 1e-6, 5e-7, 1e-7, 5e-8])
    np.testing.assert_allclose(meromorphic_weights(), raw / (2 * raw.sum()), rtol=1e-14)
    assert meromorphic_weights().sum() == pytest.approx(0.5, abs=1e-15)


def test_meromorphic_bounded_over_support():
    # w.y lies in [-3 sum of odd-slot weights, 3 sum of even-slot weights]
    bm = benchmark_spec("meromorphic")
    w = meromorphic_weights()
    lo, hi = -3 * w[1::2].sum(), 3 * w[0::2].sum()
    assert lo >= -0.5 and hi <= 1.0
    g = bm(sample_inputs(bm.dists, 10**5, seed=2))
    assert np.all((g >= 1 / (1 + hi)) & (g <= 1 / (1 + lo)))
    assert np.all((g >= 0.5) & (g <= 2.0))


def test_benchmark_specs():
    bh = benchmark_spec("borehole")
    assert bh.dim == 8 and all(isinstance(d, TruncatedNormal) for d in bh.dists)
    assert bh.dists[0] == TruncatedNormal(0.1, 0.016182, 0.05, 0.15)
    r = bh.dists[1]
    assert r.mu == pytest.approx(math.exp(7.71 + 1.0056**2 / 2), rel=1e-15)
    assert r.sigma**2 == pytest.approx((math.exp(1.0056**2) - 1) * math.exp(2 * 7.71 + 1.0056**2), rel=1e-14)
    assert (r.l, r.u) == (100, 50000)
    tu = bh.dists[2]
    assert (tu.mu, tu.l, tu.u) == ((63070 + 115600) / 2, 63070, 115600)
    assert tu.sigma**2 == pytest.approx((115600 - 63070) ** 2 / 12, rel=1e-14)

    st = benchmark_spec("steel-column")
    assert st.dim == 10
    kinds = [type(d).__name__ for d in st.dists]
    assert kinds.count("TruncatedNormal") == 7 and kinds.count("Gumbel") == 3
    assert st.dists[2] == st.dists[3] == Gumbel(559495, 70173)
    assert st.dists[0] == TruncatedNormal(400, 35, 295, 505)
    assert st.dists[9] == TruncatedNormal(7500, 7.5, 7470, 7530)

    me = benchmark_spec("meromorphic")
    assert me.dim == 16
    assert all(d == TruncatedNormal(0, 1, 0, 3) for d in me.dists[0::2])
    assert all(d == TruncatedNormal(0, 1, -3, 0) for d in me.dists[1::2])

    with pytest.raises(KeyError):
        benchmark_spec("ishigami")
    assert set(NAMES) == {"borehole", "steel-column", "meromorphic"}


@pytest.mark.parametrize("name", NAMES)
def test_distribution_masses(name):
    for d in benchmark_spec(name).dists:
        lo, hi = d.support()
        mass, _ = integrate.quad(d.pdf, lo, hi, points=[d.mode()] if lo < d.mode() < hi else None, limit=400)
        assert abs(mass - 1) <= 1e-10


@pytest.mark.parametrize("name", NAMES)
def test_finite_over_samples(name):
    bm = benchmark_spec(name)
    g = bm(sample_inputs(bm.dists, 10**4, seed=1))
    assert g.shape == (10**4,) and np.all(np.isfinite(g))
