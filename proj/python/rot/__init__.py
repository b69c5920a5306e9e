"""Renyi outlier test.

Transforms a vector of (optionally prior-weighted) p-values into unit
exponentials via a compensator time change, computes the K-robust omnibus
outlier statistic, and converts it into a global-null p-value using
Monte-Carlo-calibrated lookup tables.
"""

from ._core import (
    LadderSpec,
    RotResult,
    TableSet,
    TestReport,
    TransformResult,
    __version__,
    calibrate_tables,
    choose_kstar,
    classical_renyi,
    collapse_tail,
    fixed_k_test,
    log1m_exp,
    log_beta_upper_reg,
    log_gamma_upper_reg,
    renyi_transform,
    rot_statistic,
    rot_test,
    simulate_null,
)

__all__ = [
    "LadderSpec",
    "RotResult",
    "TableSet",
    "TestReport",
    "TransformResult",
    "__version__",
    "calibrate_tables",
    "choose_kstar",
    "classical_renyi",
    "collapse_tail",
    "fixed_k_test",
    "log1m_exp",
    "log_beta_upper_reg",
    "log_gamma_upper_reg",
    "renyi_transform",
    "rot_statistic",
    "rot_test",
    "simulate_null",
]
