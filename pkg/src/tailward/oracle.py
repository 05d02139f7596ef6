"""Ground-truth survival functions for X+Y and X*Y via conditioning.

For independent X, Y the survival function of the sum is E SF_X(u - Y) and
that of the product (for positive variables) is E SF_X(u / Y); both are
computed by adaptive log-space quadrature against Y's density, so the
result stays accurate even when SF_X underflows by thousands of orders of
magnitude across the integration range.

Where SF_X saturates at 1 (arguments below X's support) the remaining mass
is exactly Y's own survival function and is added analytically instead of
being integrated; that keeps heavy-tailed conditioning laws cheap and
removes the endpoint singularity the infinite-range transform would
otherwise create.

These integrals are the referee for every closed-form tail in
:mod:`tailward.asymptotic_engine`; they never consult the closed forms.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, TailwardError, Unsupported
from .quadrature import log_quad, logsumexp_pair
from .tail_model import (
    AsymptoticTail,
    DistributionModel,
    RatioRow,
    RatioTable,
    sf_eval,
)

__all__ = ["sf_sum_exact", "sf_product_exact", "ratio_table"]

_RTOL = 1e-9


def sf_sum_exact(x: DistributionModel, y: DistributionModel, u: float,
                 rtol: float = _RTOL) -> float:
    """log P(X + Y > u) = log E SF_X(u - Y) by quadrature over Y's law."""
    if y.family == "constant":
        return float(x.log_sf(u - y.params["c"]))
    if x.family == "constant":
        return float(y.log_sf(u - x.params["c"]))
    if y.log_density is None:
        raise Unsupported(
            f"sum oracle needs a density for the conditioning law, "
            f"{y.family!r} has none"
        )
    y_lo, y_hi = y.support
    x_lo, x_hi = x.support
    # SF_X(u - yy) is 0 for yy <= u - x_hi and 1 for yy >= u - x_lo.
    lo_eff = max(y_lo, u - x_hi)
    hi_eff = min(y_hi, u - x_lo)
    saturated = -math.inf
    if math.isfinite(x_lo) and u - x_lo < y_hi:
        saturated = float(y.log_sf(u - x_lo))
    if hi_eff <= lo_eff:
        return saturated

    def log_integrand(yy):
        return x.log_sf(u - yy) + y.log_density(yy)

    body = log_quad(log_integrand, lo_eff, hi_eff, rtol=rtol)
    return logsumexp_pair(body, saturated)


def sf_product_exact(x: DistributionModel, y: DistributionModel, u: float,
                     rtol: float = _RTOL) -> float:
    """log P(X * Y > u) = log E SF_X(u / Y) for positive X, Y and u > 0."""
    if u <= 0:
        raise DomainError(f"product oracle needs u > 0, got u={u}")
    for m in (x, y):
        if m.support[0] < 0:
            raise DomainError(
                f"product oracle needs positive supports, {m.family} has "
                f"{m.support}"
            )
    if y.family == "constant":
        return float(x.log_sf(u / y.params["c"]))
    if x.family == "constant":
        return float(y.log_sf(u / x.params["c"]))
    if y.log_density is None:
        raise Unsupported(
            f"product oracle needs a density for the conditioning law, "
            f"{y.family!r} has none"
        )
    y_lo, y_hi = y.support
    x_lo, x_hi = x.support
    # SF_X(u / yy) is 0 for yy <= u / x_hi and 1 for yy >= u / x_lo (x_lo > 0).
    lo_eff = max(y_lo, 0.0 if math.isinf(x_hi) else u / x_hi)
    hi_eff = y_hi
    saturated = -math.inf
    if x_lo > 0.0 and u / x_lo < y_hi:
        hi_eff = min(y_hi, u / x_lo)
        saturated = float(y.log_sf(u / x_lo))
    if hi_eff <= lo_eff:
        return saturated

    def log_integrand(yy):
        with np.errstate(divide="ignore"):
            return x.log_sf(u / np.maximum(yy, 1e-320)) + y.log_density(yy)

    body = log_quad(log_integrand, lo_eff, hi_eff, rtol=rtol)
    return logsumexp_pair(body, saturated)


def ratio_table(
    x: DistributionModel,
    y: DistributionModel,
    op: str,
    predicted: AsymptoticTail,
    grid,
    rtol: float = _RTOL,
) -> RatioTable:
    """Exact-vs-asymptotic survival ratios over a grid of levels.

    Rows where the oracle fails are marked and kept; a verification report
    never loses its remaining rows to one bad level.
    """
    if op == "sum":
        oracle = sf_sum_exact
    elif op == "product":
        oracle = sf_product_exact
    else:
        raise DomainError(f"unknown oracle op {op!r}")
    grid = [float(g) for g in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly increasing")
    rows = []
    for u in grid:
        log_h = sf_eval(predicted, u)
        try:
            log_sf = oracle(x, y, u, rtol=rtol)
            rows.append(
                RatioRow(
                    u=u,
                    log_sf_exact=log_sf,
                    log_h=log_h,
                    ratio=math.exp(log_sf - log_h),
                    method="quadrature",
                )
            )
        except TailwardError as exc:
            rows.append(
                RatioRow(
                    u=u,
                    log_sf_exact=math.nan,
                    log_h=log_h,
                    ratio=math.nan,
                    method="quadrature",
                    status=f"failed: {exc}",
                )
            )
    return RatioTable(tuple(rows))
