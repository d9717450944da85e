"""측정 사건 모델: 원점수, 표준점수, 점수 곱 쿼터니언

원점수 𝒜 = (-I·ã)(μ·ã), 𝔅 = (+I·b̃)(μ·b̃) 를 전체 기하곱으로 계산하고
표준점수는 원점수를 표준편차 쌍벡터로 왼쪽 나눗셈하여 얻는다.
모든 곱은 λ 의 대수(orientation=λ)에서 계산한다.
"""

from dataclasses import dataclass
from typing import Dict, Tuple
import math
import numpy as np
from algebra.multivector import (
    E12,
    IDENTITY_TOLERANCE,
    Bivector,
    Multivector,
    Quaternion,
    check_orientation,
    gp,
    inner,
    inverse,
)
from model.orientation import Orientation, setting_vector
from utils.logger import get_logger

logger = get_logger(__name__)

# 각주의 주장: α ≠ β 이면 𝒜𝔅 가 -1 과 +1 을 번갈아 가진다
FOOTNOTE_RAW_PRODUCT_CLAIM = "alternates between -1 and +1 for alpha != beta"

DEFAULT_RELEASE_STRIDE = 1024


def mu_dot(vector_angle: float, orientation: int) -> Multivector:
    """μ·ã (설정 각도의 회전 벡터와 μ 의 내적)"""
    lam = check_orientation(orientation)
    return inner(Orientation(lam).mu, setting_vector(vector_angle), lam)


def sigma_raw_A(alpha: float) -> Bivector:
    """A 원점수의 표준편차 쌍벡터 -I·ã"""
    return -setting_vector(alpha).dual()


def sigma_raw_B(beta: float) -> Bivector:
    """B 원점수의 표준편차 쌍벡터 +I·b̃"""
    return setting_vector(beta).dual()


def _unit_scalar(product: Multivector, label: str) -> int:
    """곱이 정확한 스칼라 ±1 인지 확인 후 반올림"""
    residual = float(np.max(np.abs(product.coefficients[1:])))
    value = product.scalar_part
    rounded = int(round(value))
    if residual > IDENTITY_TOLERANCE or rounded not in (1, -1) or abs(value - rounded) > IDENTITY_TOLERANCE:
        raise RuntimeError(f"{label} 원점수가 스칼라 ±1 이 아닙니다: {product.to_text()}")
    return rounded


def raw_score_A(alpha: float, orientation: int) -> int:
    """
    A 관측소 원점수 (-I·ã)(μ·ã)

    Args:
        alpha: A 편광자 각도 (라디안)
        orientation: λ

    Returns:
        +1 또는 -1

    Raises:
        RuntimeError: 곱이 스칼라 ±1 이 아닐 때
    """
    lam = check_orientation(orientation)
    product = gp(sigma_raw_A(alpha), mu_dot(alpha, lam), lam)
    return _unit_scalar(product, "A")


def raw_score_B(beta: float, orientation: int) -> int:
    """
    B 관측소 원점수 (+I·b̃)(μ·b̃)

    Args:
        beta: B 편광자 각도 (라디안)
        orientation: λ

    Returns:
        +1 또는 -1

    Raises:
        RuntimeError: 곱이 스칼라 ±1 이 아닐 때
    """
    lam = check_orientation(orientation)
    product = gp(sigma_raw_B(beta), mu_dot(beta, lam), lam)
    return _unit_scalar(product, "B")


def _standard_score(raw: int, sigma: Bivector, expected: Multivector, label: str) -> Bivector:
    score = gp(inverse(sigma), float(raw))
    if not score.is_close(expected):
        raise RuntimeError(f"{label} 표준점수가 μ·v 와 다릅니다: {score.to_text()}")
    return Bivector.from_multivector(score)


def standard_score_A(alpha: float, orientation: int) -> Bivector:
    """
    A 표준점수 = inverse(σ_A) 𝒜 = μ·ã

    Args:
        alpha: A 편광자 각도 (라디안)
        orientation: λ

    Returns:
        쌍벡터 μ·ã
    """
    raw = raw_score_A(alpha, orientation)
    return _standard_score(raw, sigma_raw_A(alpha), mu_dot(alpha, orientation), "A")


def standard_score_B(beta: float, orientation: int) -> Bivector:
    """B 표준점수 = inverse(σ_B) 𝔅 = μ·b̃"""
    raw = raw_score_B(beta, orientation)
    return _standard_score(raw, sigma_raw_B(beta), mu_dot(beta, orientation), "B")


def score_product(alpha: float, beta: float, orientation: int) -> Quaternion:
    """
    표준점수 곱 쿼터니언 (μ·ã)(μ·b̃)

    닫힌 형태 -cos2(α-β) + (μ·e_z) sin2(α-β) 와 성분별로 비교한다.

    Args:
        alpha: A 각도 (라디안)
        beta: B 각도 (라디안)
        orientation: λ

    Returns:
        단위 쿼터니언

    Raises:
        RuntimeError: 닫힌 형태와 다를 때
    """
    lam = check_orientation(orientation)
    product = gp(standard_score_A(alpha, lam), standard_score_B(beta, lam), lam)
    delta = 2.0 * (alpha - beta)
    expected = Multivector.scalar(-math.cos(delta)) + E12 * (lam * math.sin(delta))
    if not product.is_close(expected):
        raise RuntimeError(f"점수 곱이 닫힌 형태와 다릅니다: {product.to_text()}")
    return Quaternion.from_multivector(product)


def qm_prediction(alpha: float, beta: float) -> float:
    """일중항 상태의 기대 상관 -cos2(α-β)"""
    return -math.cos(2.0 * (alpha - beta))


@dataclass(frozen=True)
class TrialOutcome:
    """한 시행의 결과 (각도는 라디안)"""
    orientation: int
    alpha: float
    beta: float
    raw_a: int
    raw_b: int
    trial: int = 0

    def __post_init__(self):
        check_orientation(self.orientation)
        if self.raw_a not in (1, -1) or self.raw_b not in (1, -1):
            raise ValueError(f"원점수는 ±1 이어야 합니다: ({self.raw_a}, {self.raw_b})")


@dataclass(frozen=True)
class ValidationPolicy:
    """원점수 전체 곱 재검증 주기 (debug: 매 시행, release: 1024 시행마다)"""
    stride: int = DEFAULT_RELEASE_STRIDE

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"검증 주기는 1 이상이어야 합니다: {self.stride}")

    @classmethod
    def debug(cls) -> "ValidationPolicy":
        return cls(1)

    @classmethod
    def release(cls, stride: int = DEFAULT_RELEASE_STRIDE) -> "ValidationPolicy":
        return cls(stride)

    def sampled_indices(self, start: int, stop: int) -> np.ndarray:
        """[start, stop) 안에서 검증할 전역 시행 번호"""
        first = -(-start // self.stride) * self.stride
        return np.arange(first, stop, self.stride, dtype=np.int64)


def outcome_table(alpha: float, beta: float) -> Dict[int, Tuple[int, int]]:
    """
    λ 별 (𝒜, 𝔅) 표 (전체 기하곱으로 계산)

    Returns:
        {+1: (𝒜, 𝔅), -1: (𝒜, 𝔅)}
    """
    return {o.lam: (raw_score_A(alpha, o.lam), raw_score_B(beta, o.lam)) for o in Orientation}


def raw_outcomes(
    alpha: float,
    beta: float,
    orientations: np.ndarray,
    policy: ValidationPolicy = ValidationPolicy(),
    trial_offset: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    λ 배열에 대한 원점수 배열

    표 조회로 계산하고 정책에 따라 표본 시행을 전체 곱으로 재검증한다.

    Args:
        alpha: A 각도 (라디안)
        beta: B 각도 (라디안)
        orientations: λ 배열 (int8, ±1)
        policy: 재검증 정책
        trial_offset: 배열 첫 원소의 전역 시행 번호

    Returns:
        (𝒜 배열, 𝔅 배열), int8

    Raises:
        RuntimeError: 재검증 결과가 표와 다를 때
    """
    table = outcome_table(alpha, beta)
    right = orientations == 1
    raw_a = np.where(right, table[1][0], table[-1][0]).astype(np.int8)
    raw_b = np.where(right, table[1][1], table[-1][1]).astype(np.int8)

    sampled = policy.sampled_indices(trial_offset, trial_offset + len(orientations)) - trial_offset
    for index in sampled:
        lam = int(orientations[index])
        if raw_score_A(alpha, lam) != raw_a[index] or raw_score_B(beta, lam) != raw_b[index]:
            raise RuntimeError(f"시행 {trial_offset + index} 원점수 재검증 실패")
    logger.debug(f"원점수 재검증: {len(sampled)}개 시행")

    return raw_a, raw_b
