"""멀티벡터 평균, 표준편차, 표준점수"""

from typing import Sequence, Union
import math
import numpy as np
from algebra.multivector import Multivector, MultivectorLike, as_multivector, gp, inverse
from utils.logger import get_logger

logger = get_logger(__name__)

SampleLike = Union[np.ndarray, Sequence[MultivectorLike]]


def as_coefficient_array(xs: SampleLike) -> np.ndarray:
    """
    표본을 (n, 8) 계수 배열로 변환

    Raises:
        ValueError: 빈 표본이거나 모양이 맞지 않을 때
    """
    if isinstance(xs, np.ndarray):
        values = np.asarray(xs, dtype=float)
    else:
        values = np.array([as_multivector(x).coefficients for x in xs], dtype=float)

    if values.size == 0:
        raise ValueError("빈 표본의 통계량은 계산할 수 없습니다")
    if values.ndim != 2 or values.shape[1] != 8:
        raise ValueError(f"표본 배열은 (n, 8) 모양이어야 합니다: {values.shape}")
    return values


def mean_mv(xs: SampleLike) -> Multivector:
    """
    성분별 평균

    Args:
        xs: 멀티벡터 표본 또는 (n, 8) 계수 배열

    Returns:
        평균 멀티벡터
    """
    return Multivector(as_coefficient_array(xs).mean(axis=0))


def std_mv(xs: SampleLike) -> float:
    """
    대수 노름 기준 표준편차 √(Σ‖xᵢ - m‖²/n)

    Args:
        xs: 멀티벡터 표본 또는 (n, 8) 계수 배열

    Returns:
        스칼라 표준편차 (모집단 1/n 정규화)
    """
    values = as_coefficient_array(xs)
    deviations = values - values.mean(axis=0)
    # Cl(3,0) 에서 reverse(q)·q 의 스칼라 부분은 계수 제곱합
    return math.sqrt(float(np.mean(np.sum(deviations * deviations, axis=1))))


def zscore(raw: MultivectorLike, mean: MultivectorLike, sigma: MultivectorLike) -> Multivector:
    """
    표준점수 (왼쪽 나눗셈) inverse(σ)(x - m)

    Args:
        raw: 원값
        mean: 평균
        sigma: 표준편차 (버서)

    Returns:
        표준점수 멀티벡터

    Raises:
        ValueError: σ 가 역원을 갖지 않을 때
    """
    return gp(inverse(sigma), as_multivector(raw) - as_multivector(mean))


def weighted_moments(values: np.ndarray, counts: np.ndarray) -> tuple:
    """
    이산 값과 개수로부터 평균과 표준편차 (정수 개수 가중)

    Args:
        values: (k, 8) 서로 다른 값
        counts: (k,) 각 값의 개수

    Returns:
        (평균 (8,) 배열, 표준편차)
    """
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total < 1:
        raise ValueError("빈 표본의 통계량은 계산할 수 없습니다")
    weights = counts.astype(float) / total
    mean = np.sum(values * weights[:, None], axis=0)
    deviations = values - mean
    variance = float(np.sum(weights * np.sum(deviations * deviations, axis=1)))
    return mean, math.sqrt(max(variance, 0.0))
