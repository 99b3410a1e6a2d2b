import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from lejasparse.benchmarks import borehole_dists, meromorphic_dists, steel_column_dists
from lejasparse.distributions import (
    Gumbel,
    Normal,
    TruncatedNormal,
    Uniform,
    from_record,
    support_mass,
    truncated_from_uniform,
)

ALL_BENCHMARK_DISTS = sorted(
    set(borehole_dists()) | set(steel_column_dists()) | set(meromorphic_dists()), key=repr
)
GENERIC = [Uniform(-1, 1), Uniform(0, 2), Normal(0, 1), Normal(3, 0.5), TruncatedNormal(0, 1, 0, 3),
           TruncatedNormal(0, 1, -3, 0), TruncatedNormal(2, 0.3, 2.5, 4), Gumbel(0, 1)]


def test_pdf_examples():
    assert Uniform(-1, 1).pdf(0) == 0.5
    assert TruncatedNormal(0, 1, 0, 3).pdf(-0.5) == 0
    assert Gumbel(0, 1).pdf(0) == pytest.approx(math.exp(-1), rel=1e-14)


def test_cdf_examples():
    assert Uniform(-1, 1).cdf(0) == 0.5
    assert TruncatedNormal(0, 1, -3, 3).cdf(0) == pytest.approx(0.5, abs=1e-15)
    assert Gumbel(0, 1).cdf(0) == pytest.approx(math.exp(-1), rel=1e-14)


def test_icdf_examples():
    assert Uniform(0, 2).icdf(0.25) == 0.5
    assert TruncatedNormal(0, 1, -3, 3).icdf(0.5) == pytest.approx(0, abs=1e-15)
    assert Gumbel(0, 1).icdf(math.exp(-1)) == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
def test_icdf_rejects_levels_outside_open_interval(p):
    with pytest.raises(ValueError):
        Normal(0, 1).icdf(p)


def test_support_examples():
    assert TruncatedNormal(0, 1, 0, 3).support() == (0, 3)
    assert Uniform(-1, 1).support() == (-1, 1)
    lo, hi = Gumbel(0, 1).support()
    assert lo == pytest.approx(-math.log(-math.log(1e-12)), rel=1e-14)
    assert (round(lo, 4), round(hi, 3)) == (-3.3189, 27.631)
    assert Normal(0, 1).support().width > 0


def test_sample_examples():
    assert Uniform(-1, 1).sample(0.75) == 0.5
    tail = TruncatedNormal(0, 1, -3, 0).sample(1 - 1e-12)
    assert -1e-10 < tail <= 0
    assert Gumbel(559495, 70173).sample(math.exp(-1)) == pytest.approx(559495, rel=1e-14)


@pytest.mark.parametrize(
    "bad",
    [lambda: Uniform(1, 1), lambda: Normal(0, 0), lambda: TruncatedNormal(0, 1, 2, 1),
     lambda: TruncatedNormal(0, -1, 0, 1), lambda: Gumbel(0, 0), lambda: TruncatedNormal(0, 1, 60, 70)],
)
def test_invalid_parameters_rejected_at_construction(bad):
    with pytest.raises(ValueError):
        bad()


@pytest.mark.parametrize("dist", GENERIC + ALL_BENCHMARK_DISTS, ids=repr)
def test_normalization(dist):
    lo, hi = dist.support()
    # independent oracle: adaptive Gauss-Kronrod on the density
    points = [dist.mode()] if lo < dist.mode() < hi else None
    val, _ = integrate.quad(dist.pdf, lo, hi, points=points, epsabs=1e-14, epsrel=1e-13, limit=500)
    assert abs(val - support_mass(dist)) <= 1e-10
    assert abs(support_mass(dist) - 1) <= 2.1e-12


@pytest.mark.parametrize("dist", GENERIC + ALL_BENCHMARK_DISTS, ids=repr)
def test_quantile_round_trip(dist):
    p = np.random.default_rng(4).uniform(0.001, 0.999, 1000)
    assert np.max(np.abs(dist.cdf(dist.icdf(p)) - p)) <= 1e-9
    lo, hi = dist.support()
    y = dist.icdf(p)
    assert np.all((y >= lo) & (y <= hi))


@pytest.mark.parametrize("dist", GENERIC, ids=repr)
def test_cdf_monotone(dist):
    lo, hi = dist.support()
    c = dist.cdf(np.linspace(lo, hi, 5001))
    assert np.all(np.diff(c) >= 0)
    assert c[0] == pytest.approx(0, abs=1e-11) and c[-1] == pytest.approx(1, abs=1e-11)


def test_against_scipy_reference():
    y = np.linspace(-2, 5, 71)
    tn = TruncatedNormal(0.5, 1.3, -1, 4)
    ref = stats.truncnorm((-1 - 0.5) / 1.3, (4 - 0.5) / 1.3, loc=0.5, scale=1.3)
    np.testing.assert_allclose(tn.pdf(y), ref.pdf(y), rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(tn.cdf(y), ref.cdf(y), rtol=1e-12, atol=1e-15)
    g = Gumbel(2, 3)
    np.testing.assert_allclose(g.pdf(y), stats.gumbel_r(2, 3).pdf(y), rtol=1e-12)
    np.testing.assert_allclose(Normal(1, 2).icdf([0.1, 0.5, 0.9]), stats.norm(1, 2).ppf([0.1, 0.5, 0.9]), rtol=1e-14)


def test_truncated_density_is_renormalized_parent():
    tn = TruncatedNormal(30, 10, 0, 60)
    y = np.linspace(0.5, 59.5, 50)
    mass, _ = integrate.quad(Normal(30, 10).pdf, 0, 60, epsabs=1e-15, epsrel=1e-13)
    np.testing.assert_allclose(tn.pdf(y), Normal(30, 10).pdf(y) / mass, rtol=1e-12)


def test_far_tail_truncation_keeps_digits():
    # truncation window deep in the upper tail
    tn = TruncatedNormal(0, 1, 8, 9)
    assert tn.mass == pytest.approx(stats.norm.sf(8) - stats.norm.sf(9), rel=1e-12)
    p = np.array([1e-6, 0.3, 0.999999])
    np.testing.assert_allclose(tn.cdf(tn.icdf(p)), p, rtol=1e-9, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(
    mu=st.floats(-5, 5), sigma=st.floats(0.1, 5),
    lo=st.floats(-3, 2), width=st.floats(0.05, 4), p=st.floats(1e-6, 1 - 1e-6),
)
def test_truncated_round_trip_property(mu, sigma, lo, width, p):
    tn = TruncatedNormal(mu, sigma, mu + lo * sigma, mu + (lo + width) * sigma)
    assert abs(tn.cdf(tn.icdf(p)) - p) <= 1e-9


def test_uniform_conversion_matches_moments():
    tn = truncated_from_uniform(990.0, 1110.0)
    assert tn.mu == 1050.0
    assert tn.sigma == pytest.approx(120 / math.sqrt(12), rel=1e-15)
    assert tn.support() == (990.0, 1110.0)


def test_record_round_trip_and_validation():
    for d in GENERIC:
        assert from_record(d.to_record()) == d
    with pytest.raises(ValueError, match="unknown"):
        from_record({"type": "Beta", "a": 1})
    with pytest.raises(ValueError, match="missing"):
        from_record({"type": "Normal", "mu": 0})
    with pytest.raises(ValueError, match="unexpected"):
        from_record({"type": "Normal", "mu": 0, "sigma": 1, "sigm": 2})
