"""Sampling estimators: correctness, intervals, reproducibility."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tailward as tw
from tailward.errors import SpecError
from tailward.montecarlo import block_rng, resolve_workers, wilson_interval
from tailward.oracle import sf_sum_exact


@given(k=st.integers(0, 1000), n=st.integers(1, 1000))
@settings(max_examples=200, deadline=None)
def test_wilson_interval_orders_and_bounds(k, n):
    k = min(k, n)
    lo, hi = wilson_interval(k, n)
    p = k / n
    assert 0.0 <= lo <= p <= hi <= 1.0


def test_wilson_interval_degenerate_counts():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0.0 < hi < 0.05
    lo, hi = wilson_interval(100, 100)
    assert 0.95 < lo < 1.0 and hi == 1.0


def test_direct_estimate_exponential_tail():
    m = tw.make_model("weibull(1,1)")
    est = tw.estimate_sf(m, None, "sum", [1.0], 10 ** 6, seed=0)[0]
    assert est.ci_lo <= math.exp(-1) <= est.ci_hi
    assert est.p_hat == pytest.approx(math.exp(-1), abs=3e-3)


def test_direct_estimate_below_support_is_one():
    m = tw.make_model("weibull(1,1)")
    est = tw.estimate_sf(m, None, "sum", [-0.5], 10 ** 3, seed=0)[0]
    assert est.p_hat == 1.0 and est.ci_hi == 1.0


def test_direct_estimate_is_deterministic_and_worker_independent():
    x = tw.make_model("weibull(1,2)")
    y = tw.make_model("pareto(1,2)")
    runs = [
        tw.estimate_sf(x, y, "sum", [3.0, 5.0], 50_000, seed=7, workers=w)
        for w in (1, 2, 8, None)
    ]
    assert runs[0] == runs[1] == runs[2] == runs[3]
    again = tw.estimate_sf(x, y, "sum", [3.0, 5.0], 50_000, seed=7, workers=1)
    assert again == runs[0]


def test_custom_combiner():
    x = tw.make_model("constant(3)")
    y = tw.make_model("constant(4)")
    est = tw.estimate_sf(
        x, y, "custom", [4.9, 5.1], 10 ** 3, seed=0,
        combiner=lambda a, b: np.hypot(a, b),
    )
    assert est[0].p_hat == 1.0 and est[1].p_hat == 0.0


def test_estimate_requires_minimum_samples():
    with pytest.raises(SpecError):
        tw.estimate_sf(tw.make_model("normal()"), None, "sum", [0.0], 10, seed=0)


def test_conditional_constant_summand_gives_point_mass():
    x = tw.make_model("weibull(1,2)")
    est = tw.conditional_sf(x, tw.make_model("constant(0)"), "sum", [2.0], 10 ** 3, seed=0)[0]
    assert est.p_hat == pytest.approx(math.exp(-4.0), rel=1e-12)
    assert est.ci_hi - est.ci_lo < 1e-9


def test_conditional_covers_quadrature_truth(weibull12, edge01):
    truth = math.exp(sf_sum_exact(weibull12, edge01, 8.0))
    est = tw.conditional_sf(weibull12, edge01, "sum", [8.0], 10 ** 5, seed=1)[0]
    assert est.ci_lo <= truth <= est.ci_hi


def test_conditional_product_tracks_power_prediction(lognormal01, pareto12):
    # Combined prediction: second moment times the power coefficient.
    est = tw.conditional_sf(lognormal01, pareto12, "product", [100.0], 10 ** 6, seed=2)[0]
    predicted = math.exp(2.0) * 100.0 ** -2
    half = (est.ci_hi - est.ci_lo) / 2
    assert abs(est.p_hat - predicted) <= half + 0.05 * predicted


def test_conditional_variance_never_exceeds_direct(weibull12, edge01):
    # Rao-Blackwell guarantee, measured on a fixture grid.
    n = 200_000
    grid = [1.0, 2.0, 3.0]
    direct = tw.estimate_sf(weibull12, edge01, "sum", grid, n, seed=5)
    conditional = tw.conditional_sf(weibull12, edge01, "sum", grid, n, seed=5)
    for d, c in zip(direct, conditional):
        var_direct = d.p_hat * (1 - d.p_hat)
        var_conditional = (((c.ci_hi - c.ci_lo) / 2) / 1.959963984540054) ** 2 * n
        assert var_conditional <= var_direct + 1e-9


def test_conditional_coverage_over_replications(weibull12, edge01):
    # 200 independent replications of the interval at n=2000; at least 180
    # must cover the quadrature truth (99%-level binomial bound on 95% CIs).
    truth = math.exp(sf_sum_exact(weibull12, edge01, 2.0))
    n_cover = 0
    for rep in range(200):
        est = tw.conditional_sf(weibull12, edge01, "sum", [2.0], 2000, seed=1000 + rep)[0]
        n_cover += est.ci_lo <= truth <= est.ci_hi
    assert n_cover >= 180, n_cover


def test_block_rng_streams_are_stable():
    a = block_rng(1, 0).standard_normal(4)
    b = block_rng(1, 0).standard_normal(4)
    c = block_rng(1, 1).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_resolve_workers_honors_env_cap(monkeypatch):
    monkeypatch.setenv("TAILWARD_THREADS", "2")
    assert resolve_workers(8) == 2
    assert resolve_workers(None) == 1
    monkeypatch.delenv("TAILWARD_THREADS")
    assert resolve_workers(8) == 8
