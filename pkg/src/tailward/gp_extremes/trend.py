"""Supremum tail asymptotics for self-similar processes with power trends.

The base problem is P(sup_t (X(t) - c*t^beta) > u) for a centered
self-similar process X that is locally stationary after standardization.
Its closed asymptotic is assembled from a set of derived constants; the
random-trend and shifted variants (trend slope eta and offset zeta drawn
independently of X) reduce to the product/sum tail calculus of
:mod:`tailward.asymptotic_engine` through the self-similarity rescaling
u -> u**(1 - H/beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy import special

from ..asymptotic_engine import (
    product_mixed_tail,
    sum_dominant_tail,
    sum_mixed_tail,
)
from ..errors import (
    AssumptionError,
    BoundaryCase,
    ConditionError,
    MissingEConstant,
    MissingPickands,
    SpecError,
)
from ..tail_model import (
    AsymptoticTail,
    EdgePower,
    PowerTail,
    WeibullType,
    power_substitute,
)

__all__ = [
    "EtaSpec",
    "ZetaSpec",
    "TrendModel",
    "TrendConstants",
    "pickands_exact",
    "trend_constants",
    "trend_tail_asymptotic",
    "TrendTailValue",
    "random_trend_tail",
    "shifted_trend_tail",
    "shifted_trend_case",
    "std_normal_pdf",
    "std_normal_tail",
    "log_std_normal_pdf",
    "log_std_normal_tail",
    "bm_sup_ratio_moment",
]

_LOG_2PI = math.log(2.0 * math.pi)


def std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def log_std_normal_pdf(x: float) -> float:
    return -0.5 * _LOG_2PI - 0.5 * x * x


def std_normal_tail(x: float) -> float:
    return float(special.ndtr(-x))


def log_std_normal_tail(x: float) -> float:
    return float(special.log_ndtr(-x))


# ---------------------------------------------------------------------------
# Model description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaSpec:
    """Lower-edge behaviour of the random trend slope eta > 0.

    P(eta < delta + x) ~ C * x**mu as x -> 0, with delta the essential
    infimum of eta.
    """

    delta: float
    C: float
    mu: float

    def __post_init__(self):
        if self.delta < 0 or self.C <= 0 or self.mu <= 0:
            raise SpecError(f"bad eta spec {self}")


@dataclass(frozen=True)
class ZetaSpec:
    """Lower-tail behaviour of the offset zeta.

    With delta0 = -inf the lower tail is a power:
    P(zeta < -u) ~ C * u**-gamma.  With finite delta0 = ess inf zeta the
    approach is an edge power: P(zeta < delta0 + x) ~ C * x**gamma.
    """

    delta0: float
    C: float
    gamma: float

    def __post_init__(self):
        if self.C <= 0 or self.gamma <= 0 or math.isnan(self.delta0):
            raise SpecError(f"bad zeta spec {self}")


@dataclass(frozen=True)
class TrendModel:
    """Parameters of the conditionally Gaussian supremum problem.

    ``d_ref`` anchors the limit constant of local stationarity: the
    standardized process has D(s) = (s_ref / s)**alpha_loc * d_value, which
    is the homogeneous rule induced by self-similarity.
    """

    H: float
    beta: float
    alpha_loc: float
    d_ref: tuple[float, float]
    eta: Optional[EtaSpec] = None
    zeta: Optional[ZetaSpec] = None
    pickands: Optional[float] = None
    e_const: Optional[float] = None

    def __post_init__(self):
        if not (0 < self.H < 1):
            raise SpecError(f"H must be in (0, 1), got {self.H}")
        if not self.beta > self.H:
            raise SpecError(f"beta must exceed H, got beta={self.beta}, H={self.H}")
        if not (0 < self.alpha_loc <= 2):
            raise SpecError(f"alpha_loc must be in (0, 2], got {self.alpha_loc}")
        s_ref, d_val = self.d_ref
        if s_ref <= 0 or d_val <= 0:
            raise SpecError(f"d_ref must be positive, got {self.d_ref}")

    def d_at(self, s: float) -> float:
        s_ref, d_val = self.d_ref
        return (s_ref / s) ** self.alpha_loc * d_val

    @classmethod
    def brownian(cls, eta: EtaSpec | None = None, zeta: ZetaSpec | None = None,
                 beta: float = 1.0) -> "TrendModel":
        """Standard Brownian motion: H=1/2, alpha_loc=1, D(s)=1/s."""
        return cls(H=0.5, beta=beta, alpha_loc=1.0, d_ref=(1.0, 1.0),
                   eta=eta, zeta=zeta)

    @classmethod
    def fbm(cls, H: float, beta: float, eta: EtaSpec | None = None,
            zeta: ZetaSpec | None = None, pickands: float | None = None,
            e_const: float | None = None) -> "TrendModel":
        """Fractional Brownian motion: alpha_loc = 2H, D(s) = s**(-2H)."""
        return cls(H=H, beta=beta, alpha_loc=2.0 * H, d_ref=(1.0, 1.0),
                   eta=eta, zeta=zeta, pickands=pickands, e_const=e_const)

    def is_brownian(self) -> bool:
        return (
            self.H == 0.5
            and self.alpha_loc == 1.0
            and abs(self.d_at(1.0) - 1.0) < 1e-12
        )


# ---------------------------------------------------------------------------
# Derived constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrendConstants:
    s0: float
    A: float
    B: float
    C: float
    K_s: float
    K_A: float
    K_B: float
    K_D: float
    K: float
    pickands: float
    c: float
    H: float
    beta: float
    alpha_loc: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def pickands_exact(alpha_loc: float) -> float | None:
    if alpha_loc == 1.0:
        return 1.0
    if alpha_loc == 2.0:
        return 1.0 / math.sqrt(math.pi)
    return None


def trend_constants(model: TrendModel, c: float) -> TrendConstants:
    """All derived constants of the deterministic-trend asymptotic."""
    if c <= 0:
        raise SpecError(f"trend coefficient must be positive, got {c}")
    H, beta, a = model.H, model.beta, model.alpha_loc
    pickands = model.pickands if model.pickands is not None else pickands_exact(a)
    if pickands is None:
        raise MissingPickands(
            f"no exact Pickands constant for alpha_loc={a}; supply one or "
            f"estimate it first"
        )
    base = H / (beta - H)
    k_s = base ** (1.0 / beta)
    k_a = base ** (-H / beta) * beta / (beta - H)
    k_b = base ** (-(H + 2.0) / beta) * H * beta
    k_d = model.d_at(k_s)
    if a < 2.0:
        k = (
            pickands
            * math.sqrt(math.pi)
            * k_d ** (1.0 / a)
            / (math.sqrt(k_b) * 2.0 ** (1.0 / a - 0.5))
            * k_a ** (2.0 / a - 1.5)
        )
    else:
        k = 2.0 / k_a * math.sqrt((k_a * k_d + k_b) / k_b)
    return TrendConstants(
        s0=k_s * c ** (-1.0 / beta),
        A=k_a * c ** (H / beta),
        B=k_b * c ** ((H + 2.0) / beta),
        C=k * c ** ((H / beta) * (2.0 / a - 2.0)),
        K_s=k_s,
        K_A=k_a,
        K_B=k_b,
        K_D=k_d,
        K=k,
        pickands=pickands,
        c=c,
        H=H,
        beta=beta,
        alpha_loc=a,
    )


@dataclass(frozen=True)
class TrendTailValue:
    log_f: float  # form with the exact Gaussian tail
    log_g: float  # form with the Gaussian density (large-u equivalent)


def trend_tail_asymptotic(model: TrendModel, c: float, u: float) -> TrendTailValue:
    """Both closed forms of the deterministic-trend exceedance at level u."""
    if u <= 0:
        raise SpecError(f"level must be positive, got {u}")
    k = trend_constants(model, c)
    H, beta, a = model.H, model.beta, model.alpha_loc
    one_minus_h = 1.0 - H / beta
    arg = k.A * u ** one_minus_h
    log_g = math.log(k.C) + one_minus_h * (2.0 / a - 2.0) * math.log(u) \
        + log_std_normal_pdf(arg)
    d_s0 = model.d_at(k.s0)
    if a < 2.0:
        log_coeff = (
            math.log(k.pickands)
            + 0.5 * math.log(math.pi)
            + math.log(d_s0) / a
            - 0.5 * math.log(k.B)
            - (1.0 / a - 0.5) * math.log(2.0)
            + (2.0 / a - 0.5) * math.log(k.A)
        )
        log_f = log_coeff + one_minus_h * (2.0 / a - 1.0) * math.log(u) \
            + log_std_normal_tail(arg)
    else:
        log_f = (
            math.log(2.0)
            + 0.5 * math.log((k.A * d_s0 + k.B) / k.B)
            + log_std_normal_tail(arg)
        )
    return TrendTailValue(log_f=log_f, log_g=log_g)


# ---------------------------------------------------------------------------
# Random trend slope
# ---------------------------------------------------------------------------

def _rescaled_base_tail(model: TrendModel) -> WeibullType:
    """Tail of sup_s X(s)/(1 + s**beta) after the unit-slope rescaling."""
    k = trend_constants(model, 1.0)
    a = model.alpha_loc
    return WeibullType(
        C=k.K / math.sqrt(2.0 * math.pi),
        rho=2.0 / a - 2.0,
        K=k.K_A ** 2 / 2.0,
        alpha=2.0,
        shift=0.0,
    )


def bm_sup_ratio_moment(alpha: float) -> float:
    """E (sup_t B(t)/(1+t))**alpha for standard Brownian motion.

    The ratio's square has an exponential law, so the moment is
    2**(-alpha/2) * Gamma(alpha/2 + 1).
    """
    if alpha <= 0:
        raise SpecError(f"moment order must be positive, got {alpha}")
    return 2.0 ** (-alpha / 2.0) * math.gamma(alpha / 2.0 + 1.0)


def _sup_ratio_moment(model: TrendModel, alpha: float) -> float:
    if model.e_const is not None:
        return model.e_const
    if model.is_brownian() and model.beta == 1.0:
        return bm_sup_ratio_moment(alpha)
    raise MissingEConstant(
        f"no sup-ratio moment of order {alpha} available; set e_const on the "
        f"model (estimate it with econst_estimate)"
    )


def random_trend_tail(model: TrendModel) -> AsymptoticTail:
    """Tail of sup_t (X(t) - eta*t**beta) for a random slope eta.

    With ess inf eta = delta > 0 the slope concentrates near its edge and
    the tail stays of Gaussian type in u**(1-H/beta); with delta = 0 heavy
    slopes near zero dominate and the tail becomes a power whose exponent
    is mu*(beta-H)/H and whose coefficient carries the sup-ratio moment
    E (sup X(t)/(1+t**beta))**(beta*mu/H).
    """
    if model.eta is None:
        raise SpecError("random_trend_tail needs an eta spec on the model")
    eta = model.eta
    H, beta = model.H, model.beta
    h = H / beta
    if eta.delta > 0.0:
        edge = EdgePower(
            C=eta.C * (beta / H) ** eta.mu * eta.delta ** ((1.0 + h) * eta.mu),
            sigma=eta.delta ** (-h),
            mu=eta.mu,
        )
        rescaled = product_mixed_tail(_rescaled_base_tail(model), edge)
        return power_substitute(rescaled, 1.0 - h)
    order = beta * eta.mu / H
    e_val = _sup_ratio_moment(model, order)
    return PowerTail(eta.C * e_val, eta.mu * (beta - H) / H)


# ---------------------------------------------------------------------------
# Random trend slope plus random offset
# ---------------------------------------------------------------------------

def _zeta_minus_tail(zeta: ZetaSpec) -> AsymptoticTail:
    """Upper tail of -zeta from the declared lower tail of zeta."""
    if math.isinf(zeta.delta0):
        return PowerTail(zeta.C, zeta.gamma)
    return EdgePower(zeta.C, -zeta.delta0, zeta.gamma)


def shifted_trend_case(model: TrendModel) -> str:
    """Which regime decides the tail of sup(X - eta*t**beta - zeta)."""
    if model.eta is None or model.zeta is None:
        raise SpecError("shifted_trend_case needs eta and zeta specs")
    zeta = model.zeta
    if math.isinf(zeta.delta0):
        if model.eta.delta > 0.0:
            return "offset_dominates"
        s0_alpha = model.eta.mu * (model.beta - model.H) / model.H
        if s0_alpha > zeta.gamma:
            return "offset_dominates"
        if s0_alpha < zeta.gamma:
            return "slope_dominates"
        return "boundary"
    return "edge_offset"


def shifted_trend_tail(model: TrendModel) -> AsymptoticTail:
    """Tail of sup_t (X(t) - eta*t**beta - zeta), all sources independent.

    The offset only matters through the upper tail of -zeta: a power lower
    tail of zeta competes with the supremum tail (the heavier power wins;
    equal exponents are refused), while a finite lower edge shifts the
    Gaussian-type tail, which requires delta > 0 and beta > 2H so the sum
    rule's decay-order hypothesis holds.
    """
    if model.eta is None or model.zeta is None:
        raise SpecError("shifted_trend_tail needs eta and zeta specs")
    base = random_trend_tail(model)
    minus_zeta = _zeta_minus_tail(model.zeta)
    case = shifted_trend_case(model)
    if case == "boundary":
        raise BoundaryCase(
            "the supremum and offset tails decay at the same power order; "
            "neither dominates and no closed form is claimed"
        )
    if case == "offset_dominates":
        # sup(X - eta t^beta) is nonnegative: one-sided domination applies.
        return sum_dominant_tail(base, minus_zeta, x_nonnegative=True)
    if case == "slope_dominates":
        try:
            return sum_dominant_tail(minus_zeta, base, x_nonnegative=False)
        except ConditionError as exc:  # pragma: no cover - guarded by case
            raise BoundaryCase(str(exc)) from exc
    # Finite lower edge of zeta.
    if model.eta.delta <= 0.0:
        raise AssumptionError(
            "a finite-edge offset needs a positive slope edge (delta > 0)"
        )
    if 2.0 * model.H >= model.beta:
        raise AssumptionError(
            f"finite-edge offset case needs beta > 2H, got beta={model.beta}, "
            f"H={model.H} (the shifted-sum rule needs decay order > 1)"
        )
    assert isinstance(base, WeibullType)
    assert isinstance(minus_zeta, EdgePower)
    return sum_mixed_tail(base, minus_zeta)
