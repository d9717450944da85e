"""통계 추정, CHSH, 오차 전파 모듈"""

from analytics.rng import RngContract, sample_orientations
from analytics.statistics import mean_mv, std_mv, zscore
from analytics.correlation import (
    CorrelationEstimate,
    coincidence_correlate,
    correlate_coincidence,
    correlate_raw_normalized,
    correlate_standard,
    expectation_single,
)
from analytics.chsh import (
    AngleQuad,
    ChshReport,
    analytic_report,
    chsh_bound_cross,
    chsh_bound_sine,
    chsh_string,
    variance_inequality_report,
)
from analytics.error_propagation import (
    PropagationResult,
    RandomBivectorSpec,
    gaussian_density,
    propagate,
    sample_w,
    taylor_linear_check,
)
from analytics.verification import IdentityCheck, run_identity_suite

__all__ = [
    "RngContract",
    "sample_orientations",
    "mean_mv",
    "std_mv",
    "zscore",
    "CorrelationEstimate",
    "coincidence_correlate",
    "correlate_coincidence",
    "correlate_raw_normalized",
    "correlate_standard",
    "expectation_single",
    "AngleQuad",
    "ChshReport",
    "analytic_report",
    "chsh_bound_cross",
    "chsh_bound_sine",
    "chsh_string",
    "variance_inequality_report",
    "PropagationResult",
    "RandomBivectorSpec",
    "gaussian_density",
    "propagate",
    "sample_w",
    "taylor_linear_check",
    "IdentityCheck",
    "run_identity_suite",
]
