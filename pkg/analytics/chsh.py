"""CHSH 문자열, 분산 부등식 경계, 교환자 보고"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple
import math
import numpy as np
from algebra.multivector import IDENTITY_TOLERANCE, Multivector, commutator, gp, norm
from analytics.correlation import sampled_counts, standard_from_counts
from analytics.rng import RngContract
from model.orientation import setting_vector
from model.scores import ValidationPolicy, qm_prediction, standard_score_A, standard_score_B
from utils.logger import get_logger

logger = get_logger(__name__)

QM_LIMIT = 2.0 * math.sqrt(2.0)
CEILING_TOLERANCE = 1e-9

Correlator = Callable[[float, float], float]


@dataclass(frozen=True)
class AngleQuad:
    """CHSH 각도 사중쌍 (α, α′, β, β′), 라디안"""
    alpha: float
    alpha_prime: float
    beta: float
    beta_prime: float

    def __post_init__(self):
        for value in self.as_tuple():
            if not math.isfinite(value):
                raise ValueError(f"각도는 유한해야 합니다: {value}")

    @classmethod
    def from_degrees(cls, angles: Sequence[float]) -> "AngleQuad":
        if len(angles) != 4:
            raise ValueError(f"각도 4개가 필요합니다: {list(angles)}")
        return cls(*(math.radians(angle) for angle in angles))

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.alpha, self.alpha_prime, self.beta, self.beta_prime)

    def degrees(self) -> Tuple[float, ...]:
        return tuple(math.degrees(angle) for angle in self.as_tuple())


@dataclass(frozen=True)
class ChshReport:
    """CHSH 보고서"""
    string_value: float
    bound_sine: float
    bound_cross: float
    qm_limit: float
    commutator_norms: Tuple[float, float]
    variance_rhs: float
    within_variance_bound: bool
    within_qm_ceiling: bool
    commutation_holds: bool
    quad: AngleQuad
    trials: Optional[int] = None
    correlations: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "quad_deg": list(self.quad.degrees()),
            "string_value": float(self.string_value),
            "bound": self.bound_sine,
            "bound_sine": self.bound_sine,
            "bound_cross": self.bound_cross,
            "qm_limit": self.qm_limit,
            "commutator_norms": [float(value) for value in self.commutator_norms],
            "variance_rhs": self.variance_rhs,
            "within_variance_bound": bool(self.within_variance_bound),
            "within_qm_ceiling": bool(self.within_qm_ceiling),
            "commutation_holds": bool(self.commutation_holds),
            "trials": self.trials,
            "correlations": dict(self.correlations),
        }


def chsh_string(correlator: Correlator, q: AngleQuad) -> float:
    """
    CHSH 문자열 E(α,β) + E(α,β′) + E(α′,β) - E(α′,β′)

    Args:
        correlator: 상관 함수 (라디안 각도 두 개 → 실수)
        q: 각도 사중쌍

    Returns:
        S
    """
    return (
        correlator(q.alpha, q.beta)
        + correlator(q.alpha, q.beta_prime)
        + correlator(q.alpha_prime, q.beta)
        - correlator(q.alpha_prime, q.beta_prime)
    )


def sine_product(q: AngleQuad) -> float:
    """
    sin2(α-α′)·sin2(β-β′)

    Raises:
        RuntimeError: [-1, 1] 범위를 벗어날 때
    """
    value = math.sin(2.0 * (q.alpha - q.alpha_prime)) * math.sin(2.0 * (q.beta - q.beta_prime))
    if not -1.0 - IDENTITY_TOLERANCE <= value <= 1.0 + IDENTITY_TOLERANCE:
        raise RuntimeError(f"사인 곱이 범위를 벗어났습니다: {value}")
    return value


def chsh_bound_sine(q: AngleQuad) -> float:
    """2√(1 + sin2(α-α′)·sin2(β-β′)), 범위 [0, 2√2]"""
    return 2.0 * math.sqrt(max(0.0, 1.0 + sine_product(q)))


def cross_dot(q: AngleQuad) -> float:
    """(ã×ã′)·(b̃′×b̃)"""
    a, a_prime = setting_vector(q.alpha), setting_vector(q.alpha_prime)
    b, b_prime = setting_vector(q.beta), setting_vector(q.beta_prime)
    return a.cross(a_prime).dot(b_prime.cross(b))


def chsh_bound_cross(q: AngleQuad) -> float:
    """2√(1 - (ã×ã′)·(b̃′×b̃))"""
    return 2.0 * math.sqrt(max(0.0, 1.0 - cross_dot(q)))


def qm_ceiling() -> float:
    """|S| 의 양자역학 상한 2√2"""
    return QM_LIMIT


def score_commutators(q: AngleQuad, orientation: int) -> Tuple[Multivector, Multivector]:
    """[A_a, A_a′], [B_b′, B_b] (λ 대수의 표준점수 교환자)"""
    left = commutator(
        standard_score_A(q.alpha, orientation),
        standard_score_A(q.alpha_prime, orientation),
        orientation,
    )
    right = commutator(
        standard_score_B(q.beta_prime, orientation),
        standard_score_B(q.beta, orientation),
        orientation,
    )
    return left, right


def commutator_norms(q: AngleQuad) -> Tuple[float, float]:
    """‖[A_a, A_a′]‖, ‖[B_b′, B_b]‖ (λ 와 무관)"""
    left, right = score_commutators(q, 1)
    return norm(left), norm(right)


def cross_commutator_norm(q: AngleQuad) -> float:
    """
    서로 다른 관측소 표준점수 교환자 [A_n, B_n′] 의 최대 노름

    0 이면 교환 가정이 성립한다.
    """
    largest = 0.0
    for lam in (1, -1):
        for alpha in (q.alpha, q.alpha_prime):
            for beta in (q.beta, q.beta_prime):
                value = commutator(standard_score_A(alpha, lam), standard_score_B(beta, lam), lam)
                largest = max(largest, value.max_abs())
    return largest


def variance_rhs(q: AngleQuad, counts: Dict[int, int]) -> float:
    """
    분산 부등식 우변 √⟨4 + [A_a, A_a′][B_b′, B_b]⟩

    Args:
        q: 각도 사중쌍
        counts: λ 별 개수

    Returns:
        우변 값

    Raises:
        RuntimeError: 평균의 쌍벡터 부분이 소멸하지 않거나 교차곱 형태와 다를 때
    """
    n = counts[1] + counts[-1]
    total = np.zeros(8)
    for lam in (1, -1):
        left, right = score_commutators(q, lam)
        total = total + counts[lam] * (4.0 + gp(left, right, lam)).coefficients
    mean = Multivector(total / n)

    if np.max(np.abs(mean.coefficients[1:])) > 16.0 * IDENTITY_TOLERANCE:
        raise RuntimeError(f"분산 부등식 우변의 쌍벡터 부분이 소멸하지 않습니다: {mean.to_text()}")
    squared = mean.scalar_part
    expected = 4.0 * (1.0 - cross_dot(q))
    if abs(squared - expected) > 16.0 * IDENTITY_TOLERANCE:
        raise RuntimeError(f"분산 부등식 우변이 교차곱 형태와 다릅니다: {squared} != {expected}")
    return math.sqrt(max(0.0, squared))


def _build_report(q: AngleQuad, string_value: float, rhs: float, trials: Optional[int], correlations: Dict[str, float]) -> ChshReport:
    bound_sine = chsh_bound_sine(q)
    bound_cross = chsh_bound_cross(q)
    # 제곱근 전의 값으로 비교
    if abs(sine_product(q) + cross_dot(q)) > IDENTITY_TOLERANCE:
        raise RuntimeError(f"사인 경계와 교차곱 경계가 다릅니다: {bound_sine} != {bound_cross}")

    within_ceiling = abs(string_value) <= qm_ceiling() + CEILING_TOLERANCE
    if not within_ceiling:
        raise RuntimeError(f"|S| 가 2√2 를 넘었습니다: {string_value}")

    within_bound = abs(string_value) <= rhs + CEILING_TOLERANCE
    if not within_bound:
        logger.warning(f"분산 부등식 |S| ≤ 우변 불성립: |S|={abs(string_value):.12f}, 우변={rhs:.12f}")

    holds = cross_commutator_norm(q) <= IDENTITY_TOLERANCE
    if not holds:
        logger.warning("관측소 간 표준점수 교환 가정 [A_n, B_n′] = 0 불성립")

    return ChshReport(
        string_value=string_value,
        bound_sine=bound_sine,
        bound_cross=bound_cross,
        qm_limit=QM_LIMIT,
        commutator_norms=commutator_norms(q),
        variance_rhs=rhs,
        within_variance_bound=within_bound,
        within_qm_ceiling=within_ceiling,
        commutation_holds=holds,
        quad=q,
        trials=trials,
        correlations=correlations,
    )


def _pair_labels(q: AngleQuad) -> Dict[str, Tuple[float, float]]:
    return {
        "E(a,b)": (q.alpha, q.beta),
        "E(a,b')": (q.alpha, q.beta_prime),
        "E(a',b)": (q.alpha_prime, q.beta),
        "E(a',b')": (q.alpha_prime, q.beta_prime),
    }


def variance_inequality_report(
    q: AngleQuad,
    trials: int,
    rng: RngContract,
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> ChshReport:
    """
    표본 기반 CHSH 보고서

    네 상관값은 같은 λ 표본에서 표준점수 추정기의 스칼라 부분으로 계산한다.

    Args:
        q: 각도 사중쌍
        trials: 시행 수
        rng: 난수 계약
        workers: 작업자 수
        policy: 원점수 재검증 정책

    Returns:
        ChshReport
    """
    counts = sampled_counts(q.alpha, q.beta, trials, rng, workers, policy)
    correlations = {
        label: standard_from_counts(alpha, beta, counts).scalar_part
        for label, (alpha, beta) in _pair_labels(q).items()
    }
    string_value = (
        correlations["E(a,b)"] + correlations["E(a,b')"] + correlations["E(a',b)"] - correlations["E(a',b')"]
    )
    report = _build_report(q, string_value, variance_rhs(q, counts), trials, correlations)
    logger.info(f"CHSH 보고서 생성 완료: S={report.string_value:.12f}, 경계={report.bound_sine:.12f}")
    return report


def analytic_report(q: AngleQuad) -> ChshReport:
    """
    해석적 상관 -cos2(α-β) 로 계산한 CHSH 보고서

    Args:
        q: 각도 사중쌍

    Returns:
        ChshReport (trials 없음)
    """
    correlations = {label: qm_prediction(alpha, beta) for label, (alpha, beta) in _pair_labels(q).items()}
    string_value = chsh_string(qm_prediction, q)
    balanced = {1: 1, -1: 1}
    return _build_report(q, string_value, variance_rhs(q, balanced), None, correlations)
