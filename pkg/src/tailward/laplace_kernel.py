"""Laplace-type integrals: log-space numerics and their closed asymptotics.

The central object is the truncated tail-mass integral

    I(u) = int_0^delta z**mu * (u+z)**beta * exp(-K*(u+z)**alpha) dz,

whose large-u behaviour drives the sum/product tail formulas.  Every
numeric routine factors exp(-K*u**alpha) out of the integrand before
quadrature so the remaining factor stays within double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AssumptionError, SpecError
from .quadrature import log_quad

__all__ = [
    "tail_integral_numeric",
    "tail_integral_asymptotic",
    "watson_numeric",
    "watson_asymptotic",
    "LaplaceProblem",
    "LaplaceResult",
    "laplace_general",
]


def _check_positive(**kv):
    for name, val in kv.items():
        if not val > 0:
            raise SpecError(f"{name} must be positive, got {val}")


def tail_integral_numeric(
    u: float,
    alpha: float,
    beta: float,
    mu: float,
    K: float,
    delta: float,
    rtol: float = 1e-10,
) -> float:
    """log I(u) by adaptive quadrature, exact up to the requested rtol."""
    _check_positive(u=u, alpha=alpha, mu=mu, K=K)
    if delta < 0:
        raise SpecError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return -math.inf
    peak = K * u ** alpha  # integrand maximum sits at z = 0

    def log_rest(z):
        with np.errstate(divide="ignore"):
            return (
                mu * np.log(np.maximum(z, 1e-320))
                + beta * np.log(u + z)
                - K * ((u + z) ** alpha - u ** alpha)
            )

    return -peak + log_quad(log_rest, 0.0, delta, rtol=rtol)


def tail_integral_asymptotic(
    u: float, alpha: float, beta: float, mu: float, K: float
) -> float:
    """log of the closed large-u form of I(u); needs decay order alpha > 1."""
    _check_positive(u=u, mu=mu, K=K)
    if alpha <= 1:
        raise AssumptionError(
            f"closed form requires alpha > 1, got alpha={alpha}"
        )
    return (
        -(mu + 1.0) * math.log(K * alpha)
        + math.lgamma(mu + 1.0)
        + (beta - (alpha - 1.0) * (mu + 1.0)) * math.log(u)
        - K * u ** alpha
    )


def watson_numeric(u: float, mu: float, delta: float, rtol: float = 1e-11) -> float:
    """log int_0^delta v**mu * exp(-u*v) dv by quadrature."""
    _check_positive(u=u)
    if mu < 0:
        raise SpecError(f"mu must be nonnegative, got {mu}")
    if delta < 0:
        raise SpecError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return -math.inf

    def log_f(v):
        with np.errstate(divide="ignore"):
            return mu * np.log(np.maximum(v, 1e-320)) - u * v

    # Seed the panel split around the scale 1/u of the kernel.
    breaks = [b for b in ((mu + 1.0) / u, 10.0 * (mu + 1.0) / u) if 0 < b < delta]
    return log_quad(log_f, 0.0, delta, rtol=rtol, breakpoints=breaks)


def watson_asymptotic(u: float, mu: float) -> float:
    """log of Gamma(mu+1) * u**-(mu+1), the large-u limit of the integral."""
    _check_positive(u=u)
    if mu < 0:
        raise SpecError(f"mu must be nonnegative, got {mu}")
    return math.lgamma(mu + 1.0) - (mu + 1.0) * math.log(u)


# ---------------------------------------------------------------------------
# General Laplace problems with a boundary minimum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaplaceProblem:
    """F(u) = int_0^a x**(mu-1) * f(x) * exp(-u*S(x)) dx.

    S must attain its minimum over [0, a] only at 0 and have a positive
    one-sided derivative there; f must be continuous with f(0) != 0.
    Function fields must be reentrant: problems are shared freely across
    threads.
    """

    f: Callable[[np.ndarray], np.ndarray]
    S: Callable[[np.ndarray], np.ndarray]
    mu: float
    a: float

    def __post_init__(self):
        _check_positive(mu=self.mu, a=self.a)


@dataclass(frozen=True)
class LaplaceResult:
    numeric: float     # log F(u) by quadrature
    asymptotic: float  # log of Gamma(mu) * f(0) * S'(0)**-mu * u**-mu * e**(-u*S(0))


def _derivative_at_zero(S, step: float = 1e-6) -> float:
    # One-sided second-order difference: (-3 S(0) + 4 S(h) - S(2h)) / (2h).
    s0, s1, s2 = (float(S(np.array([x]))[0]) for x in (0.0, step, 2 * step))
    return (-3.0 * s0 + 4.0 * s1 - s2) / (2.0 * step)


def laplace_general(problem: LaplaceProblem, u: float, rtol: float = 1e-10) -> LaplaceResult:
    """Evaluate a boundary-minimum Laplace integral and its leading form."""
    _check_positive(u=u)
    f, S, mu, a = problem.f, problem.S, problem.mu, problem.a
    f0 = float(f(np.array([0.0]))[0])
    if f0 == 0.0:
        raise AssumptionError("laplace_general requires f(0) != 0")
    s0 = float(S(np.array([0.0]))[0])
    slope = _derivative_at_zero(S)
    if not slope > 1e-8:
        raise AssumptionError(
            f"S must be increasing at 0; finite differences give S'(0)={slope:.3e}"
        )

    sign = 1.0 if f0 > 0 else -1.0

    def log_integrand(x):
        xs = np.maximum(x, 1e-320)
        with np.errstate(divide="ignore", invalid="ignore"):
            fx = sign * np.asarray(f(x), dtype=float)
            out = (
                (mu - 1.0) * np.log(xs)
                + np.where(fx > 0, np.log(np.maximum(fx, 1e-320)), -np.inf)
                - u * (np.asarray(S(x), dtype=float) - s0)
            )
        return out

    # Panels seeded at the kernel scale 1/(u*S'(0)) where the mass sits.
    scale = mu / (u * slope)
    breaks = [b for b in (scale, 10 * scale, 100 * scale) if 0 < b < a]
    numeric = -u * s0 + log_quad(log_integrand, 0.0, a, rtol=rtol, breakpoints=breaks)
    if sign < 0:
        raise AssumptionError("laplace_general handles positive f near 0 only")
    asymptotic = (
        math.lgamma(mu)
        + math.log(f0)
        - mu * math.log(slope)
        - mu * math.log(u)
        - u * s0
    )
    return LaplaceResult(numeric=numeric, asymptotic=asymptotic)
