"""Log-space adaptive quadrature against closed-form integrals."""

import math

import numpy as np
import pytest

from tailward.errors import QuadratureFailure
from tailward.quadrature import log1mexp, log_quad, log_quad_result, logsumexp_pair


def test_exponential_on_half_line():
    val = log_quad(lambda x: -x, 0.0, math.inf)
    assert val == pytest.approx(0.0, abs=1e-12)


def test_gaussian_full_line():
    val = log_quad(lambda x: -0.5 * np.log(2 * np.pi) - x * x / 2.0, -math.inf, math.inf)
    assert val == pytest.approx(0.0, abs=1e-12)


def test_deep_tail_value_beyond_double_underflow():
    # int_0^inf exp(-a x) dx with the integrand shifted down by 5000 nats:
    # the log result must come back exact even though exp() would be 0.
    shift = 5000.0
    val = log_quad(lambda x: -2.0 * x - shift, 0.0, math.inf)
    assert val == pytest.approx(math.log(0.5) - shift, rel=1e-12)


def test_integrable_endpoint_singularity():
    # int_0^1 x^(-1/2) dx = 2
    val = log_quad(lambda x: -0.5 * np.log(np.maximum(x, 1e-320)), 0.0, 1.0)
    assert val == pytest.approx(math.log(2.0), abs=1e-9)


def test_empty_interval_is_log_zero():
    assert log_quad(lambda x: -x, 2.0, 2.0) == -math.inf


def test_zero_integrand_is_log_zero():
    assert log_quad(lambda x: np.full_like(x, -np.inf), 0.0, 1.0) == -math.inf


def test_breakpoints_split_a_step_integrand():
    def log_f(x):
        return np.where(x < 1.0, 0.0, -np.inf)

    val = log_quad(log_f, 0.0, 5.0, breakpoints=[1.0])
    assert val == pytest.approx(0.0, abs=1e-10)


def test_budget_exhaustion_raises_with_achieved_error():
    # A wild oscillatory-magnitude integrand with a tiny node budget.
    def log_f(x):
        return np.sin(50 * x) * 30.0

    with pytest.raises(QuadratureFailure) as err:
        log_quad(log_f, 0.0, 1.0, rtol=1e-13, max_nodes=60)
    assert err.value.achieved > 0


def test_result_object_reports_convergence():
    res = log_quad_result(lambda x: -x, 0.0, math.inf, rtol=1e-10)
    assert res.converged
    assert res.rel_error <= 1e-10
    assert res.n_nodes >= 15


def test_heavy_tail_with_infinite_limit():
    # int_1^inf x^-2.5 dx = 2/3
    val = log_quad(lambda x: -2.5 * np.log(x), 1.0, math.inf)
    assert val == pytest.approx(math.log(2.0 / 3.0), rel=1e-9)


def test_logsumexp_pair_basics():
    assert logsumexp_pair(-math.inf, -3.0) == -3.0
    assert logsumexp_pair(0.0, 0.0) == pytest.approx(math.log(2.0))


def test_log1mexp_stability():
    assert log1mexp(-1e-18) == pytest.approx(math.log(1e-18), rel=1e-6)
    assert log1mexp(-50.0) == pytest.approx(-math.exp(-50.0), rel=1e-6)
    assert log1mexp(0.0) == -math.inf
