"""3-구면 위의 오차 전파

w = p·λ·(I·n̂) 를 두 점 λ 분포로 표본 추출하고 선형 사상 f(w) = v w 를 통해
평균과 표준편차를 전파한다. 가우스 밀도는 진단용으로만 사용한다.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple
import math
import numpy as np
from scipy import integrate, stats
from algebra.multivector import (
    E12,
    IDENTITY_TOLERANCE,
    Bivector,
    Multivector,
    MultivectorLike,
    Quaternion,
    Vector3,
    as_multivector,
    batch_gp,
    gp,
    inverse,
    norm,
)
from analytics.rng import RngContract, sample_orientations
from analytics.statistics import as_coefficient_array, mean_mv, std_mv
from utils.logger import get_logger

logger = get_logger(__name__)

UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RandomBivectorSpec:
    """확률 쌍벡터 w = p μ·n̂ 명세"""
    p: float
    n_hat: Vector3
    rng: RngContract

    def __post_init__(self):
        if not math.isfinite(self.p) or not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p 는 [0, 1] 범위여야 합니다: {self.p}")
        if not self.n_hat.is_unit(UNIT_TOLERANCE):
            raise ValueError(f"n̂ 은 단위 벡터여야 합니다: 노름 {self.n_hat.norm()}")

    def plane(self) -> Bivector:
        """I·n̂"""
        return self.n_hat.dual()


@dataclass(frozen=True)
class PropagationResult:
    """오차 전파 결과"""
    m_w: Bivector
    sigma_w: float
    m_A: float
    sigma_A: Bivector
    q_minus: Quaternion
    q_plus: Quaternion
    m_A_full: Quaternion
    empirical_sigma_A: float
    w_minus: Quaternion
    w_plus: Quaternion
    slope: Bivector
    coverage: float
    n: int

    def to_dict(self) -> Dict[str, object]:
        def quaternion(q: Quaternion) -> Dict[str, object]:
            return {"scalar": q.scalar, "bivector": q.bivector.as_array().tolist()}

        return {
            "m_w": self.m_w.as_array().tolist(),
            "sigma_w": self.sigma_w,
            "m_A": self.m_A,
            "sigma_A": self.sigma_A.as_array().tolist(),
            "q_minus": quaternion(self.q_minus),
            "q_plus": quaternion(self.q_plus),
            "m_A_full": quaternion(self.m_A_full),
            "empirical_sigma_A": self.empirical_sigma_A,
            "w_minus": quaternion(self.w_minus),
            "w_plus": quaternion(self.w_plus),
            "slope": self.slope.as_array().tolist(),
            "coverage": self.coverage,
            "n": self.n,
        }


def gaussian_density(q: MultivectorLike, m: MultivectorLike, sigma: float) -> float:
    """
    쿼터니언 가우스 밀도 (1/√(2πσ²))·exp(-‖q - m‖²/(2σ²))

    Args:
        q: 평가 지점
        m: 평균
        sigma: 스칼라 표준편차

    Returns:
        밀도 값

    Raises:
        ValueError: sigma ≤ 0
    """
    if not sigma > 0:
        raise ValueError(f"sigma 는 양수여야 합니다: {sigma}")
    distance = norm(as_multivector(q) - as_multivector(m))
    return float(stats.norm.pdf(distance, loc=0.0, scale=sigma))


def density_slice_integral(sigma: float, points: int = 4001) -> float:
    """
    항등원을 지나는 측지선 q(t) = cos t + e12 sin t 위에서 밀도 적분

    Args:
        sigma: 스칼라 표준편차
        points: 구적 격자 점 개수

    Returns:
        t ∈ [-π, π] 사다리꼴 적분값 (작은 sigma 에서 ≈ 1)
    """
    if points < 3:
        raise ValueError(f"구적 점은 3개 이상이어야 합니다: {points}")
    t = np.linspace(-math.pi, math.pi, points)
    identity = Multivector.scalar(1.0)
    density = np.array(
        [gaussian_density(Multivector.scalar(math.cos(s)) + E12 * math.sin(s), identity, sigma) for s in t]
    )
    return float(integrate.trapezoid(density, t))


def sample_w_from_orientations(spec: RandomBivectorSpec, orientations: np.ndarray) -> np.ndarray:
    """주어진 λ 배열로 w = p·λ·(I·n̂) 계수 배열 생성 ((n, 8))"""
    lam = np.asarray(orientations, dtype=float)
    if lam.size == 0:
        raise ValueError("표본 수는 1 이상이어야 합니다")
    plane = spec.plane().to_multivector().coefficients
    return spec.p * lam[:, None] * plane[None, :]


def sample_w(spec: RandomBivectorSpec, n: int, workers: int = 1) -> np.ndarray:
    """
    확률 쌍벡터 표본

    Args:
        spec: 확률 쌍벡터 명세
        n: 표본 수
        workers: 작업자 수

    Returns:
        (n, 8) 계수 배열 (쌍벡터 슬롯만 0 이 아님)

    Raises:
        ValueError: n < 1
    """
    orientations = sample_orientations(n, spec.rng, workers)
    return sample_w_from_orientations(spec, orientations)


def interval_coverage(samples: np.ndarray, m: MultivectorLike, sigma: float) -> float:
    """
    ‖xᵢ - m‖ ≤ σ 인 표본 비율 (정규성 가정 없음)

    Args:
        samples: (n, 8) 계수 배열
        m: 평균
        sigma: 스칼라 표준편차

    Returns:
        0..1 비율
    """
    values = as_coefficient_array(samples)
    distances = np.sqrt(np.sum((values - as_multivector(m).coefficients) ** 2, axis=1))
    return float(np.count_nonzero(distances <= sigma + IDENTITY_TOLERANCE)) / len(values)


def interval_distance(q_minus: Quaternion, q_plus: Quaternion) -> Quaternion:
    """(q⁻ - q⁺)·sign(q⁻ - q⁺), 성분별"""
    difference = (q_minus - q_plus).to_multivector().coefficients
    return Quaternion.from_multivector(Multivector(difference * np.sign(difference)))


def _check_unit_plane(v: Bivector) -> Multivector:
    if not v.is_unit(UNIT_TOLERANCE):
        raise ValueError(f"v 는 단위 쌍벡터여야 합니다: 노름 {v.norm()}")
    return v.to_multivector()


def taylor_slope(v: Bivector, m_w: Multivector, direction: Bivector) -> Bivector:
    """
    방향 δ 에 대한 기울기 (f(m + δ) - f(m)) δ⁻¹

    선형 사상이면 v 와 같다.
    """
    step = direction.to_multivector()
    rise = gp(v, m_w + step) - gp(v, m_w)
    return Bivector.from_multivector(gp(rise, inverse(step)))


def propagate_samples(v: Bivector, w: np.ndarray, direction: Optional[Bivector] = None) -> PropagationResult:
    """
    주어진 w 표본으로 오차 전파

    Args:
        v: 단위 쌍벡터 (f(w) = v w)
        w: (n, 8) 확률 쌍벡터 표본
        direction: 기울기 측정 방향 (None 이면 e12)

    Returns:
        PropagationResult

    Raises:
        ValueError: v 가 단위 쌍벡터가 아닐 때
        RuntimeError: 등급 또는 전파 일관성 검사 실패
    """
    v_mv = _check_unit_plane(v)
    samples = as_coefficient_array(w)
    n = len(samples)

    m_w = mean_mv(samples)
    if np.max(np.abs(np.delete(m_w.coefficients, [4, 5, 6]))) > IDENTITY_TOLERANCE:
        raise RuntimeError(f"m(w) 가 등급 2 가 아닙니다: {m_w.to_text()}")
    sigma_w = std_mv(samples)

    outputs = batch_gp(v_mv.coefficients[None, :], samples)
    m_a = mean_mv(outputs)
    if not m_a.is_close(gp(v_mv, m_w)):
        raise RuntimeError(f"m(𝒜) ≠ f(m(w)): {m_a.to_text()}")

    sigma_a = Bivector.from_multivector(gp(v_mv, sigma_w))
    empirical = std_mv(outputs)
    if abs(empirical - sigma_a.norm()) > 5.0 / math.sqrt(n) + IDENTITY_TOLERANCE:
        raise RuntimeError(f"경험적 σ(𝒜) 와 전파 규칙 불일치: {empirical} != {sigma_a.norm()}")

    m_a_quaternion = Quaternion.from_multivector(m_a)
    sigma_a_quaternion = Quaternion(0.0, sigma_a)
    w_mean = Quaternion.from_multivector(m_w)
    w_sigma = Quaternion(sigma_w, Bivector(0.0, 0.0, 0.0))

    result = PropagationResult(
        m_w=m_w.bivector_part,
        sigma_w=sigma_w,
        m_A=m_a.scalar_part,
        sigma_A=sigma_a,
        q_minus=m_a_quaternion - sigma_a_quaternion,
        q_plus=m_a_quaternion + sigma_a_quaternion,
        m_A_full=m_a_quaternion,
        empirical_sigma_A=empirical,
        w_minus=w_mean - w_sigma,
        w_plus=w_mean + w_sigma,
        slope=taylor_slope(v, m_w, direction or Bivector(0.0, 0.0, 1.0)),
        coverage=interval_coverage(samples, m_w, sigma_w),
        n=n,
    )
    logger.info(
        f"오차 전파 완료: n={n}, σ(w)={sigma_w:.6f}, m(𝒜)={result.m_A:.6f}, 포함 비율={result.coverage:.4f}"
    )
    return result


def propagate(v: Bivector, spec: RandomBivectorSpec, n: int, workers: int = 1) -> PropagationResult:
    """
    f(w) = v w 를 통한 평균과 표준편차 전파

    Args:
        v: 단위 쌍벡터
        spec: 확률 쌍벡터 명세
        n: 표본 수
        workers: 작업자 수

    Returns:
        PropagationResult
    """
    _check_unit_plane(v)
    return propagate_samples(v, sample_w(spec, n, workers), direction=spec.plane())


def taylor_linear_check(
    v: Bivector,
    spec: RandomBivectorSpec,
    n: int,
    workers: int = 1,
    tolerance: float = IDENTITY_TOLERANCE,
) -> float:
    """
    1차 테일러 전개 f(m) + v(w - m) 와 f(w) 의 최대 성분 편차

    Args:
        v: 단위 쌍벡터
        spec: 확률 쌍벡터 명세
        n: 표본 수
        workers: 작업자 수
        tolerance: 허용 편차

    Returns:
        최대 편차 (선형 사상이므로 1e-12 이하)

    Raises:
        RuntimeError: 편차가 허용 오차를 넘을 때
    """
    v_mv = _check_unit_plane(v)
    samples = sample_w(spec, n, workers)
    m_w = mean_mv(samples).coefficients
    exact = batch_gp(v_mv.coefficients[None, :], samples)
    expansion = batch_gp(v_mv.coefficients, m_w)[None, :] + batch_gp(
        v_mv.coefficients[None, :], samples - m_w[None, :]
    )
    deviation = float(np.max(np.abs(expansion - exact)))
    if deviation > tolerance:
        raise RuntimeError(f"테일러 전개 편차가 허용 오차를 넘었습니다: {deviation:.3e} > {tolerance:.0e}")
    return deviation


def perspective_change(result: PropagationResult, v: Bivector) -> Tuple[Quaternion, Quaternion]:
    """
    m(w) ± σ(w) 를 f 로 옮긴 구간 끝점

    Returns:
        (f(m(w) - σ(w)), f(m(w) + σ(w)))

    Raises:
        RuntimeError: m(𝒜) ± σ(𝒜) 와 다를 때
    """
    v_mv = _check_unit_plane(v)
    lower = Quaternion.from_multivector(gp(v_mv, result.w_minus))
    upper = Quaternion.from_multivector(gp(v_mv, result.w_plus))
    if not lower.to_multivector().is_close(result.q_minus) or not upper.to_multivector().is_close(result.q_plus):
        raise RuntimeError("관점 변환 구간이 m(𝒜) ± σ(𝒜) 와 다릅니다")
    return lower, upper
