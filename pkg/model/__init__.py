"""측정 사건 모델 모듈"""

from model.orientation import Orientation, PolarizerSetting, setting_vector
from model.scores import (
    TrialOutcome,
    ValidationPolicy,
    qm_prediction,
    raw_outcomes,
    raw_score_A,
    raw_score_B,
    score_product,
    sigma_raw_A,
    sigma_raw_B,
    standard_score_A,
    standard_score_B,
)
from model.transport import limiting_quaternion, rotor_transport_prediction, transported_quaternion

__all__ = [
    "Orientation",
    "PolarizerSetting",
    "TrialOutcome",
    "ValidationPolicy",
    "limiting_quaternion",
    "qm_prediction",
    "raw_outcomes",
    "raw_score_A",
    "raw_score_B",
    "rotor_transport_prediction",
    "score_product",
    "setting_vector",
    "sigma_raw_A",
    "sigma_raw_B",
    "standard_score_A",
    "standard_score_B",
    "transported_quaternion",
]
