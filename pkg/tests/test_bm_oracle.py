"""Exact Brownian oracle: closed kernels, nesting, independent referees."""

import math

import numpy as np
import pytest
from scipy import special

import tailward as tw
from tailward.errors import DomainError
from tailward.gp_extremes import bm_exact_oracle, eta_power_low_model, negate_model


def test_constant_slope_kernel():
    c = tw.make_model("constant(1.5)")
    assert bm_exact_oracle(c, None, 2.0) == pytest.approx(-6.0, rel=1e-14)


def test_negative_level_saturates_at_one():
    c = tw.make_model("constant(1.5)")
    assert bm_exact_oracle(c, None, -3.0) == 0.0


def test_uniform_slope_watson_value():
    eta = eta_power_low_model(0.0, 1.0, 1.0)  # uniform on [0, 1]
    got = math.exp(bm_exact_oracle(eta, None, 50.0))
    exact = (1 - math.exp(-100.0)) / 100.0
    assert got == pytest.approx(exact, rel=1e-9)
    assert got == pytest.approx(0.5 / 50.0, rel=0.02)


def test_power_edge_slope_incomplete_gamma_referee():
    # Independent closed form: for eta with CDF C x^mu on [0, C^(-1/mu)],
    # E e^(-2 eta u) = C Gamma(mu+1) (2u)^-mu P(mu, 2u W).
    for delta, C, mu, u in ((0.0, 1.0, 2.0, 30.0), (0.2, 2.0, 0.7, 25.0)):
        eta = eta_power_low_model(delta, C, mu)
        width = C ** (-1.0 / mu)
        s = 2.0 * u
        expected = (
            -s * delta
            + math.log(C)
            + math.lgamma(mu + 1.0)
            - mu * math.log(s)
            + math.log(special.gammainc(mu, s * width))
        )
        assert bm_exact_oracle(eta, None, u) == pytest.approx(expected, rel=1e-8)


def test_constant_offset_is_a_shift():
    eta = eta_power_low_model(0.0, 1.0, 1.0)
    a = bm_exact_oracle(eta, tw.make_model("constant(3)"), 47.0)
    b = bm_exact_oracle(eta, None, 50.0)
    assert a == b


def test_eta_power_low_model_law(rng):
    m = eta_power_low_model(0.3, 2.0, 2.0)
    width = 2.0 ** -0.5
    assert m.support == (0.3, 0.3 + width)
    assert m.sf(0.3) == pytest.approx(1.0)
    assert m.sf(0.3 + width) == 0.0
    mid = 0.3 + width / 2
    assert m.sf(mid) == pytest.approx(1.0 - 2.0 * (width / 2) ** 2, rel=1e-12)
    xs = np.asarray(m.sample(rng, 20000))
    assert np.all((xs >= 0.3) & (xs <= 0.3 + width))
    assert np.mean(xs > mid) == pytest.approx(float(m.sf(mid)), abs=0.02)


def test_negate_model_flips_law(rng):
    m = negate_model(tw.make_model("pareto(1,2)"))
    assert m.support == (-math.inf, -1.0)
    assert m.sf(-2.0) == pytest.approx(1.0 - 0.25, rel=1e-12)
    assert float(m.log_density(-3.0)) == pytest.approx(
        float(tw.make_model("pareto(1,2)").log_density(3.0))
    )
    xs = np.asarray(m.sample(rng, 1000))
    assert np.all(xs <= -1.0)


def test_offset_with_power_lower_tail_against_series():
    # At u far above the offset scale: P(S > u) ~ P(zeta < -u) + slope tail.
    eta = eta_power_low_model(0.0, 1.0, 1.0)
    zeta = negate_model(tw.make_model("pareto(1,0.5)"))
    u = 400.0
    got = math.exp(bm_exact_oracle(eta, zeta, u))
    leading = u ** -0.5
    assert got == pytest.approx(leading, rel=0.05)
    assert got > leading  # slope term adds mass


def test_requires_positive_slope_support():
    bad = negate_model(tw.make_model("pareto(1,2)"))  # negative support
    with pytest.raises(DomainError):
        bm_exact_oracle(bad, None, 2.0)


def test_nested_integral_matches_manual_composition():
    # zeta uniform on [1, 2] via the edge family: integrate the eta-average
    # over the offset by hand with a fine midpoint rule.
    eta = eta_power_low_model(0.1, 1.0, 1.0)
    zeta = tw.make_model("edge(2,1)")
    u = 5.0
    zs = 1.0 + (np.arange(20000) + 0.5) / 20000.0
    inner = [math.exp(bm_exact_oracle(eta, None, u + z)) for z in zs[::200]]
    coarse = float(np.mean(inner))
    got = math.exp(bm_exact_oracle(eta, zeta, u))
    assert got == pytest.approx(coarse, rel=5e-3)
