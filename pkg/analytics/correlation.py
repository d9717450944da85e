"""상관 추정기: 표준점수 공분산, 원점수 정규화, 동시 계수

세 추정기는 같은 λ 표본에 대해 서로 다른 값을 낸다.
- standard: (μ·ã)(μ·b̃) 평균, 스칼라 부분은 모든 n 에서 -cos2(α-β)
- raw_normalized: 원점수 공분산을 gp(σ𝒜, σ𝔅) = ã b̃ 로 왼쪽 나눗셈
- coincidence: (C₊₊ + C₋₋ - C₊₋ - C₋₊) / ΣC, 문자 그대로의 원점수에서는 항상 -1

λ 는 ±1 두 값뿐이므로 시행별 값을 λ 별로 한 번 계산하고 정수 개수로 집계한다.
개수 합은 작업자 분할 순서와 무관하므로 결과는 스레드 수와 관계없이 비트 단위로 같다.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple
import math
import numpy as np
from algebra.multivector import Bivector, Multivector, Quaternion, gp, inverse
from analytics.rng import (
    RngContract,
    SOURCE_STREAM,
    STATION_A_STREAM,
    STATION_B_STREAM,
)
from analytics.statistics import weighted_moments
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
)
from utils.logger import get_logger
from utils.parallel import map_partitions

logger = get_logger(__name__)

ESTIMATOR_NAMES = ("standard", "raw_normalized", "coincidence")


@dataclass(frozen=True)
class CorrelationEstimate:
    """상관 추정 결과 (각도는 라디안)"""
    estimator: str
    alpha: float
    beta: float
    scalar_part: float
    bivector_residual: Bivector
    n: int
    stderr: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"표본 수는 1 이상이어야 합니다: {self.n}")
        if self.stderr < 0:
            raise ValueError(f"표준오차는 음수일 수 없습니다: {self.stderr}")

    @property
    def residual_norm(self) -> float:
        return self.bivector_residual.norm()

    def to_dict(self) -> Dict[str, object]:
        return {
            "estimator": self.estimator,
            "alpha_deg": math.degrees(self.alpha),
            "beta_deg": math.degrees(self.beta),
            "scalar_part": self.scalar_part,
            "bivector_residual": self.bivector_residual.as_array().tolist(),
            "residual_norm": self.residual_norm,
            "stderr": self.stderr,
            "n": self.n,
            "qm_prediction": qm_prediction(self.alpha, self.beta),
        }


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError(f"시행 수는 1 이상이어야 합니다: {trials}")


def count_orientations(orientations: np.ndarray) -> Dict[int, int]:
    """λ 배열의 ±1 개수"""
    lam = np.asarray(orientations)
    if lam.size == 0:
        raise ValueError("빈 λ 표본입니다")
    if not np.all(np.abs(lam) == 1):
        raise ValueError("λ 는 ±1 이어야 합니다")
    plus = int(np.count_nonzero(lam == 1))
    return {1: plus, -1: int(lam.size) - plus}


def sampled_counts(
    alpha: float,
    beta: float,
    trials: int,
    rng: RngContract,
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> Dict[int, int]:
    """
    λ 표본의 ±1 개수 (구간별로 생성하고 원점수를 표본 재검증)

    Args:
        alpha: A 각도 (라디안)
        beta: B 각도 (라디안)
        trials: 시행 수
        rng: 난수 계약
        workers: 작업자 수
        policy: 원점수 재검증 정책

    Returns:
        {+1: 개수, -1: 개수}
    """
    _check_trials(trials)

    def work(start: int, stop: int) -> int:
        lam = rng.orientations(start, stop)
        raw_outcomes(alpha, beta, lam, policy, trial_offset=start)
        return int(np.count_nonzero(lam == 1))

    plus = sum(map_partitions(work, trials, workers))
    return {1: plus, -1: trials - plus}


def _moments(values: Dict[int, np.ndarray], counts: Dict[int, int]) -> Tuple[np.ndarray, float, int]:
    keys = (1, -1)
    stacked = np.array([values[k] for k in keys], dtype=float)
    weights = np.array([counts[k] for k in keys], dtype=np.int64)
    mean, spread = weighted_moments(stacked, weights)
    return mean, spread, int(weights.sum())


def expectation_from_counts(angle: float, counts: Dict[int, int], station: str = "A") -> float:
    """λ 개수로부터 단일 관측소 원점수 평균"""
    if station not in ("A", "B"):
        raise ValueError(f"관측소는 A 또는 B 여야 합니다: {station}")
    score = raw_score_A if station == "A" else raw_score_B
    values = {lam: np.full(8, 0.0) for lam in (1, -1)}
    for lam in (1, -1):
        values[lam][0] = score(angle, lam)
    mean, _, _ = _moments(values, counts)
    return float(mean[0])


def expectation_single(
    angle: float,
    trials: int,
    rng: RngContract,
    station: str = "A",
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> float:
    """
    단일 관측소 원점수 기대값 (0 으로 수렴)

    Args:
        angle: 편광자 각도 (라디안)
        trials: 시행 수
        rng: 난수 계약
        station: "A" 또는 "B"
        workers: 작업자 수
        policy: 원점수 재검증 정책

    Returns:
        원점수 평균
    """
    counts = sampled_counts(angle, angle, trials, rng, workers, policy)
    value = expectation_from_counts(angle, counts, station)
    logger.info(f"단일 기대값 계산 완료: 관측소 {station}, n={trials}, 값={value:.6f}")
    return value


def standard_from_counts(alpha: float, beta: float, counts: Dict[int, int]) -> CorrelationEstimate:
    """λ 개수로부터 표준점수 상관 추정"""
    values = {lam: score_product(alpha, beta, lam).to_multivector().coefficients for lam in (1, -1)}
    mean, spread, n = _moments(values, counts)
    result = Multivector(mean)
    return CorrelationEstimate(
        estimator="standard",
        alpha=alpha,
        beta=beta,
        scalar_part=result.scalar_part,
        bivector_residual=result.bivector_part,
        n=n,
        stderr=spread / math.sqrt(n),
    )


def correlate_standard(
    alpha: float,
    beta: float,
    trials: int,
    rng: RngContract,
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> CorrelationEstimate:
    """
    표준점수 공분산 ℰ(α, β) = ⟨(μ·ã)(μ·b̃)⟩

    Args:
        alpha: A 각도 (라디안)
        beta: B 각도 (라디안)
        trials: 시행 수
        rng: 난수 계약
        workers: 작업자 수
        policy: 원점수 재검증 정책

    Returns:
        스칼라 부분 -cos2(α-β), 쌍벡터 잔차 |sin2(α-β)|·|mean λ|
    """
    counts = sampled_counts(alpha, beta, trials, rng, workers, policy)
    estimate = standard_from_counts(alpha, beta, counts)
    logger.info(
        f"표준점수 상관 계산 완료: n={trials}, 스칼라={estimate.scalar_part:.12f}, "
        f"잔차={estimate.residual_norm:.3e}"
    )
    return estimate


def raw_normalized_from_counts(alpha: float, beta: float, counts: Dict[int, int]) -> CorrelationEstimate:
    """λ 개수로부터 원점수 정규화 상관 추정"""
    raw = {lam: (raw_score_A(alpha, lam), raw_score_B(beta, lam)) for lam in (1, -1)}
    n = counts[1] + counts[-1]
    if n < 1:
        raise ValueError("빈 λ 표본입니다")

    mean_a = (counts[1] * raw[1][0] + counts[-1] * raw[-1][0]) / n
    mean_b = (counts[1] * raw[1][1] + counts[-1] * raw[-1][1]) / n

    centered = {}
    for lam in (1, -1):
        values = np.zeros(8)
        values[0] = (raw[lam][0] - mean_a) * (raw[lam][1] - mean_b)
        centered[lam] = values
    mean, spread, _ = _moments(centered, counts)
    covariance = float(mean[0])

    # gp(σ𝒜, σ𝔅) = (-I·ã)(+I·b̃) = ã b̃
    normalizer = gp(sigma_raw_A(alpha), sigma_raw_B(beta))
    quotient = Quaternion.from_multivector(gp(inverse(normalizer), covariance))
    logger.debug(f"원점수 공분산: {covariance:.12f}")

    return CorrelationEstimate(
        estimator="raw_normalized",
        alpha=alpha,
        beta=beta,
        scalar_part=quotient.scalar,
        bivector_residual=quotient.bivector,
        n=n,
        stderr=spread / math.sqrt(n),
    )


def correlate_raw_normalized(
    alpha: float,
    beta: float,
    trials: int,
    rng: RngContract,
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> CorrelationEstimate:
    """
    원점수 공분산 (-1 - m𝒜·m𝔅) 을 gp(σ𝒜, σ𝔅) 로 왼쪽 나눗셈한 쿼터니언

    Args:
        alpha: A 각도 (라디안)
        beta: B 각도 (라디안)
        trials: 시행 수
        rng: 난수 계약
        workers: 작업자 수
        policy: 원점수 재검증 정책

    Returns:
        몫 쿼터니언의 스칼라/쌍벡터 부분
    """
    counts = sampled_counts(alpha, beta, trials, rng, workers, policy)
    estimate = raw_normalized_from_counts(alpha, beta, counts)
    logger.info(f"원점수 정규화 상관 계산 완료: n={trials}, 스칼라={estimate.scalar_part:.12f}")
    return estimate


def coincidence_counts(raw_a: np.ndarray, raw_b: np.ndarray) -> Dict[str, int]:
    """
    동시 계수 C₊₊, C₋₋, C₊₋, C₋₊

    Raises:
        ValueError: 빈 표본이거나 길이가 다를 때
    """
    a = np.asarray(raw_a)
    b = np.asarray(raw_b)
    if a.size == 0:
        raise ValueError("빈 기록으로는 동시 계수를 계산할 수 없습니다")
    if a.shape != b.shape:
        raise ValueError(f"A/B 기록 길이가 다릅니다: {a.shape} != {b.shape}")
    return {
        "++": int(np.count_nonzero((a == 1) & (b == 1))),
        "--": int(np.count_nonzero((a == -1) & (b == -1))),
        "+-": int(np.count_nonzero((a == 1) & (b == -1))),
        "-+": int(np.count_nonzero((a == -1) & (b == 1))),
    }


def coincidence_value(counts: Dict[str, int]) -> float:
    """(C₊₊ + C₋₋ - C₊₋ - C₋₊) / (C₊₊ + C₋₋ + C₊₋ + C₋₊)"""
    total = counts["++"] + counts["--"] + counts["+-"] + counts["-+"]
    if total == 0:
        raise ValueError("동시 계수 합이 0 입니다")
    return (counts["++"] + counts["--"] - counts["+-"] - counts["-+"]) / total


def coincidence_correlate(records: Sequence[TrialOutcome]) -> float:
    """
    동시 계수 상관

    Args:
        records: 시행 결과 목록

    Returns:
        상관값 (-1..+1)

    Raises:
        ValueError: 빈 기록
    """
    if len(records) == 0:
        raise ValueError("빈 기록으로는 동시 계수를 계산할 수 없습니다")
    raw_a = np.fromiter((record.raw_a for record in records), dtype=np.int8, count=len(records))
    raw_b = np.fromiter((record.raw_b for record in records), dtype=np.int8, count=len(records))
    return coincidence_value(coincidence_counts(raw_a, raw_b))


def coincidence_from_counts(alpha: float, beta: float, counts: Dict[int, int]) -> CorrelationEstimate:
    """λ 개수로부터 동시 계수 상관 추정"""
    tallies: Counter = Counter()
    products = {}
    for lam in (1, -1):
        a, b = raw_score_A(alpha, lam), raw_score_B(beta, lam)
        key = ("+" if a == 1 else "-") + ("+" if b == 1 else "-")
        tallies[key] += counts[lam]
        values = np.zeros(8)
        values[0] = a * b
        products[lam] = values

    value = coincidence_value({key: tallies.get(key, 0) for key in ("++", "--", "+-", "-+")})
    _, spread, n = _moments(products, counts)
    return CorrelationEstimate(
        estimator="coincidence",
        alpha=alpha,
        beta=beta,
        scalar_part=value,
        bivector_residual=Bivector(0.0, 0.0, 0.0),
        n=n,
        stderr=spread / math.sqrt(n),
    )


def correlate_coincidence(
    alpha: float,
    beta: float,
    trials: int,
    rng: RngContract,
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> CorrelationEstimate:
    """동시 계수 추정기 (CorrelationEstimate 형태)"""
    counts = sampled_counts(alpha, beta, trials, rng, workers, policy)
    estimate = coincidence_from_counts(alpha, beta, counts)
    logger.info(f"동시 계수 상관 계산 완료: n={trials}, 값={estimate.scalar_part:.12f}")
    return estimate


def raw_product_mean(alpha: float, beta: float, counts: Dict[int, int]) -> float:
    """원점수 곱 𝒜𝔅 의 평균 (문자 그대로의 정의에서는 상수 -1)"""
    values = {}
    for lam in (1, -1):
        row = np.zeros(8)
        row[0] = raw_score_A(alpha, lam) * raw_score_B(beta, lam)
        values[lam] = row
    mean, _, _ = _moments(values, counts)
    return float(mean[0])


ESTIMATORS_FROM_COUNTS: Dict[str, Callable[[float, float, Dict[int, int]], CorrelationEstimate]] = {
    "standard": standard_from_counts,
    "raw_normalized": raw_normalized_from_counts,
    "coincidence": coincidence_from_counts,
}


def estimates_from_counts(
    alpha: float,
    beta: float,
    counts: Dict[int, int],
    estimators: Sequence[str] = ESTIMATOR_NAMES,
) -> List[CorrelationEstimate]:
    """
    이미 집계된 λ 개수로 여러 추정기 실행

    Raises:
        ValueError: 알 수 없는 추정기 이름
    """
    for name in estimators:
        if name not in ESTIMATORS_FROM_COUNTS:
            raise ValueError(f"알 수 없는 추정기: {name}")
    return [ESTIMATORS_FROM_COUNTS[name](alpha, beta, counts) for name in estimators]


def estimate_all(
    alpha: float,
    beta: float,
    trials: int,
    rng: RngContract,
    estimators: Sequence[str] = ESTIMATOR_NAMES,
    workers: int = 1,
    policy: ValidationPolicy = ValidationPolicy(),
) -> List[CorrelationEstimate]:
    """
    같은 λ 표본으로 여러 추정기 실행

    Raises:
        ValueError: 알 수 없는 추정기 이름
    """
    for name in estimators:
        if name not in ESTIMATORS_FROM_COUNTS:
            raise ValueError(f"알 수 없는 추정기: {name}")
    counts = sampled_counts(alpha, beta, trials, rng, workers, policy)
    return estimates_from_counts(alpha, beta, counts, estimators)


def simulate_records(
    alpha: float,
    beta: float,
    trials: int,
    rng: RngContract,
    policy: ValidationPolicy = ValidationPolicy(),
) -> List[TrialOutcome]:
    """
    고정 각도 시행 결과 목록 생성

    Returns:
        TrialOutcome 리스트 (시행 번호 순)
    """
    _check_trials(trials)
    lam = rng.orientations(0, trials)
    raw_a, raw_b = raw_outcomes(alpha, beta, lam, policy)
    return [
        TrialOutcome(int(lam[i]), alpha, beta, int(raw_a[i]), int(raw_b[i]), trial=i)
        for i in range(trials)
    ]


def simulate_setting_records(
    angles_a_deg: Sequence[float],
    angles_b_deg: Sequence[float],
    trials: int,
    master_seed: int,
) -> List[TrialOutcome]:
    """
    단일 프로세스(모놀리식) 실험: 설정 선택과 결과를 한 곳에서 계산

    관측소 모드와 같은 스트림 약속(λ=0, A 설정=1, B 설정=2)을 사용하고,
    (각도, λ) 조합마다 전체 기하곱으로 계산한 원점수 표를 조회한다.

    Args:
        angles_a_deg: A 각도 목록 (도)
        angles_b_deg: B 각도 목록 (도)
        trials: 시행 수
        master_seed: 마스터 시드

    Returns:
        TrialOutcome 리스트 (시행 번호 순)

    Raises:
        ValueError: 빈 각도 목록 또는 시행 수 0
    """
    _check_trials(trials)
    if not angles_a_deg or not angles_b_deg:
        raise ValueError("각 관측소에 각도가 하나 이상 필요합니다")

    radians_a = [math.radians(angle) for angle in angles_a_deg]
    radians_b = [math.radians(angle) for angle in angles_b_deg]
    table_a = {(k, lam): raw_score_A(angle, lam) for k, angle in enumerate(radians_a) for lam in (1, -1)}
    table_b = {(k, lam): raw_score_B(angle, lam) for k, angle in enumerate(radians_b) for lam in (1, -1)}

    source = RngContract(master_seed, SOURCE_STREAM)
    lam = source.orientations(0, trials)
    index_a = source.with_stream(STATION_A_STREAM).indices(0, trials, len(radians_a))
    index_b = source.with_stream(STATION_B_STREAM).indices(0, trials, len(radians_b))

    records = []
    for i in range(trials):
        orientation, ka, kb = int(lam[i]), int(index_a[i]), int(index_b[i])
        records.append(
            TrialOutcome(
                orientation,
                radians_a[ka],
                radians_b[kb],
                table_a[(ka, orientation)],
                table_b[(kb, orientation)],
                trial=i,
            )
        )
    logger.info(f"모놀리식 시뮬레이션 완료: n={trials}")
    return records
