"""Supremum tails of self-similar Gaussian processes with random trends."""

from .bm_oracle import bm_exact_oracle, eta_power_low_model, negate_model
from .estimators import (
    McEstimate,
    econst_estimate,
    pickands_estimate,
    sup_exceedance_mc,
)
from .fbm import (
    fbm_path,
    fbm_simulate,
    paths_to_csv,
    read_paths_binary,
    two_sided_path,
    write_paths_binary,
)
from .trend import (
    EtaSpec,
    TrendConstants,
    TrendModel,
    TrendTailValue,
    ZetaSpec,
    bm_sup_ratio_moment,
    log_std_normal_pdf,
    log_std_normal_tail,
    pickands_exact,
    random_trend_tail,
    shifted_trend_case,
    shifted_trend_tail,
    std_normal_pdf,
    std_normal_tail,
    trend_constants,
    trend_tail_asymptotic,
)

__all__ = [
    "bm_exact_oracle",
    "eta_power_low_model",
    "negate_model",
    "McEstimate",
    "econst_estimate",
    "pickands_estimate",
    "sup_exceedance_mc",
    "fbm_path",
    "fbm_simulate",
    "paths_to_csv",
    "read_paths_binary",
    "two_sided_path",
    "write_paths_binary",
    "EtaSpec",
    "TrendConstants",
    "TrendModel",
    "TrendTailValue",
    "ZetaSpec",
    "bm_sup_ratio_moment",
    "log_std_normal_pdf",
    "log_std_normal_tail",
    "pickands_exact",
    "random_trend_tail",
    "shifted_trend_case",
    "shifted_trend_tail",
    "std_normal_pdf",
    "std_normal_tail",
    "trend_constants",
    "trend_tail_asymptotic",
]
