"""Trend constants, closed tail forms and their internal identities."""

import math

import numpy as np
import pytest

import tailward as tw
from tailward.errors import (
    AssumptionError,
    BoundaryCase,
    MissingEConstant,
    MissingPickands,
    SpecError,
)
from tailward.gp_extremes import (
    EtaSpec,
    TrendModel,
    ZetaSpec,
    bm_sup_ratio_moment,
    pickands_exact,
    random_trend_tail,
    shifted_trend_case,
    shifted_trend_tail,
    std_normal_pdf,
    std_normal_tail,
    trend_constants,
    trend_tail_asymptotic,
)


def test_brownian_constants_reference_values():
    k = trend_constants(TrendModel.brownian(), 1.0)
    assert k.K_s == pytest.approx(1.0)
    assert k.K_A == pytest.approx(2.0)
    assert k.K_B == pytest.approx(0.5)
    assert k.K_D == pytest.approx(1.0)
    assert k.K == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)


def test_constants_scaling_identities_hold_exactly():
    model = TrendModel.fbm(H=0.75, beta=2.0, pickands=0.7)
    for c in (0.5, 1.0, 4.0):
        k = trend_constants(model, c)
        assert k.s0 == pytest.approx(k.K_s * c ** (-1 / k.beta), rel=1e-14)
        assert k.A == pytest.approx(k.K_A * c ** (k.H / k.beta), rel=1e-14)
        assert k.B == pytest.approx(k.K_B * c ** ((k.H + 2) / k.beta), rel=1e-14)
        assert k.C == pytest.approx(
            k.K * c ** ((k.H / k.beta) * (2 / k.alpha_loc - 2)), rel=1e-14
        )
        assert math.isfinite(k.K) and k.K > 0


def test_missing_pickands_raises():
    model = TrendModel.fbm(H=0.75, beta=2.0)  # alpha_loc = 1.5, no value
    with pytest.raises(MissingPickands):
        trend_constants(model, 1.0)


def test_exact_pickands_values():
    assert pickands_exact(1.0) == 1.0
    assert pickands_exact(2.0) == pytest.approx(1 / math.sqrt(math.pi))
    assert pickands_exact(1.5) is None


def test_gaussian_helpers():
    assert std_normal_pdf(0.0) == pytest.approx((2 * math.pi) ** -0.5)
    assert std_normal_tail(0.0) == pytest.approx(0.5)


def test_brownian_density_form_is_exact_exponential():
    # Unit slope, Brownian: the density form collapses to exp(-2u) exactly.
    m = TrendModel.brownian()
    for u in (0.5, 3.0, 20.0):
        v = trend_tail_asymptotic(m, 1.0, u)
        assert v.log_g == pytest.approx(-2.0 * u, rel=1e-12)


def test_tail_forms_converge_to_each_other():
    m = TrendModel.brownian()
    devs = [
        abs(math.exp(trend_tail_asymptotic(m, 1.0, u).log_f
                     - trend_tail_asymptotic(m, 1.0, u).log_g) - 1.0)
        for u in (2.0, 8.0, 32.0)
    ]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.01


def test_scaling_identity_ten_random_draws():
    rng = np.random.default_rng(7)
    for _ in range(10):
        H = rng.uniform(0.15, 0.85)
        beta = H + rng.uniform(0.2, 2.0)
        a = rng.uniform(0.3, 2.0)
        model = TrendModel(
            H=H, beta=beta, alpha_loc=a, d_ref=(1.0, rng.uniform(0.5, 2.0)),
            pickands=rng.uniform(0.4, 1.2),
        )
        c = rng.uniform(0.5, 4.0)
        u = rng.uniform(1.0, 10.0)
        g_c = trend_tail_asymptotic(model, c, u).log_g
        g_1 = trend_tail_asymptotic(model, 1.0, c ** (H / (beta - H)) * u).log_g
        assert abs(g_c - g_1) < 1e-12


def test_alpha_loc_two_branch_is_finite_and_scales():
    model = TrendModel(H=0.4, beta=1.5, alpha_loc=2.0, d_ref=(1.0, 1.0))
    k = trend_constants(model, 3.0)
    assert k.pickands == pytest.approx(1 / math.sqrt(math.pi))
    v = trend_tail_asymptotic(model, 3.0, 5.0)
    assert math.isfinite(v.log_f) and math.isfinite(v.log_g)
    g_1 = trend_tail_asymptotic(model, 1.0, 3.0 ** (0.4 / 1.1) * 5.0).log_g
    assert v.log_g == pytest.approx(g_1, abs=1e-12)


# ---------------------------------------------------------------------------
# Random slope
# ---------------------------------------------------------------------------

def test_zero_edge_slope_reduces_to_power_half():
    tail = random_trend_tail(TrendModel.brownian(eta=EtaSpec(0.0, 1.0, 1.0)))
    assert tail == tw.PowerTail(0.5, 1.0)


def test_zero_edge_exponent_general_parameters():
    # Exponent mu (beta - H) / H for the zero-edge case.
    model = TrendModel.fbm(H=0.25, beta=1.0, eta=EtaSpec(0.0, 2.0, 1.5),
                           pickands=0.8, e_const=0.37)
    tail = random_trend_tail(model)
    assert isinstance(tail, tw.PowerTail)
    assert tail.alpha == pytest.approx(1.5 * (1.0 - 0.25) / 0.25)
    assert tail.C == pytest.approx(2.0 * 0.37)


def test_zero_edge_requires_sup_ratio_moment():
    model = TrendModel.fbm(H=0.25, beta=1.0, eta=EtaSpec(0.0, 1.0, 1.0), pickands=0.8)
    with pytest.raises(MissingEConstant):
        random_trend_tail(model)


def test_brownian_sup_ratio_moment_closed_form():
    assert bm_sup_ratio_moment(2.0) == pytest.approx(0.5, rel=1e-15)
    assert bm_sup_ratio_moment(4.0) == pytest.approx(0.5, rel=1e-15)
    assert bm_sup_ratio_moment(1.0) == pytest.approx(
        2 ** -0.5 * math.gamma(1.5), rel=1e-15
    )


def test_positive_edge_slope_brownian_watson_identity():
    # delta > 0: the closed form must equal the kernel-average asymptotic
    # C_eta Gamma(mu+1) (2u)^-mu e^(-2 delta u) field by field, to 1e-12.
    for delta, c_eta, mu in ((0.3, 1.0, 1.0), (0.7, 2.0, 1.5), (1.2, 0.5, 2.0)):
        tail = random_trend_tail(TrendModel.brownian(eta=EtaSpec(delta, c_eta, mu)))
        assert isinstance(tail, tw.WeibullType)
        assert tail.C == pytest.approx(c_eta * math.gamma(mu + 1) * 2.0 ** -mu, rel=1e-12)
        assert tail.rho == pytest.approx(-mu, rel=1e-12)
        assert tail.K == pytest.approx(2.0 * delta, rel=1e-12)
        assert tail.alpha == pytest.approx(1.0, rel=1e-12)
        assert tail.shift == 0.0


def test_positive_edge_general_exponents():
    model = TrendModel.fbm(H=0.25, beta=1.0, eta=EtaSpec(0.5, 1.0, 1.0), pickands=0.8)
    tail = random_trend_tail(model)
    assert isinstance(tail, tw.WeibullType)
    assert tail.alpha == pytest.approx(2.0 * (1.0 - 0.25))
    k = trend_constants(model, 1.0)
    assert tail.K == pytest.approx(k.K_A ** 2 * 0.5 ** (2 * 0.25) / 2.0)


def test_random_trend_requires_eta():
    with pytest.raises(SpecError):
        random_trend_tail(TrendModel.brownian())


# ---------------------------------------------------------------------------
# Random slope plus offset
# ---------------------------------------------------------------------------

def test_offset_dominates_for_heavy_power_offset():
    model = TrendModel.brownian(
        eta=EtaSpec(0.0, 1.0, 1.0), zeta=ZetaSpec(-math.inf, 2.0, 0.5)
    )
    assert shifted_trend_case(model) == "offset_dominates"
    assert shifted_trend_tail(model) == tw.PowerTail(2.0, 0.5)


def test_offset_dominates_any_positive_edge_slope():
    model = TrendModel.brownian(
        eta=EtaSpec(0.4, 1.0, 1.0), zeta=ZetaSpec(-math.inf, 1.0, 7.0)
    )
    assert shifted_trend_case(model) == "offset_dominates"
    assert shifted_trend_tail(model) == tw.PowerTail(1.0, 7.0)


def test_slope_dominates_for_light_power_offset():
    model = TrendModel.brownian(
        eta=EtaSpec(0.0, 1.0, 1.0), zeta=ZetaSpec(-math.inf, 1.0, 3.0)
    )
    assert shifted_trend_case(model) == "slope_dominates"
    assert shifted_trend_tail(model) == tw.PowerTail(0.5, 1.0)


def test_equal_power_orders_refuse_a_closed_form():
    model = TrendModel.brownian(
        eta=EtaSpec(0.0, 1.0, 1.0), zeta=ZetaSpec(-math.inf, 1.0, 1.0)
    )
    assert shifted_trend_case(model) == "boundary"
    with pytest.raises(BoundaryCase):
        shifted_trend_tail(model)


def test_edge_offset_equals_sum_rule_composition():
    model = TrendModel(
        H=0.5, beta=2.0, alpha_loc=1.0, d_ref=(1.0, 1.0),
        eta=EtaSpec(0.5, 1.0, 1.0), zeta=ZetaSpec(0.2, 1.0, 1.0),
    )
    combined = shifted_trend_tail(model)
    reference = tw.sum_mixed_tail(
        random_trend_tail(model), tw.EdgePower(1.0, -0.2, 1.0)
    )
    for fld in ("C", "rho", "K", "alpha", "shift"):
        assert getattr(combined, fld) == pytest.approx(
            getattr(reference, fld), rel=1e-12
        )


def test_edge_offset_needs_shallow_hurst():
    model = TrendModel.brownian(  # beta = 1 = 2H: decay order would be 1
        eta=EtaSpec(0.5, 1.0, 1.0), zeta=ZetaSpec(0.2, 1.0, 1.0)
    )
    with pytest.raises(AssumptionError):
        shifted_trend_tail(model)


def test_edge_offset_needs_positive_slope_edge():
    model = TrendModel(
        H=0.5, beta=2.0, alpha_loc=1.0, d_ref=(1.0, 1.0),
        eta=EtaSpec(0.0, 1.0, 1.0), zeta=ZetaSpec(0.2, 1.0, 1.0),
    )
    with pytest.raises(AssumptionError):
        shifted_trend_tail(model)
