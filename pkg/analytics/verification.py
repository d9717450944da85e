"""대수 항등식 검증 모음"""

from dataclasses import dataclass
from typing import Callable, List, Tuple
import math
import numpy as np
from algebra.cayley import BIVECTOR_SLOTS, SCALAR, WEDGE_TABLE
from algebra.multivector import (
    Multivector,
    batch_gp,
    gp,
    grade,
    inner,
    mu,
)
from analytics.chsh import QM_LIMIT, AngleQuad, chsh_bound_cross, chsh_bound_sine
from model.scores import raw_score_A, raw_score_B, score_product
from utils.logger import get_logger

logger = get_logger(__name__)

LEVI_CIVITA = {(0, 1): (2, 1.0), (1, 2): (0, 1.0), (2, 0): (1, 1.0), (1, 0): (2, -1.0), (2, 1): (0, -1.0), (0, 2): (1, -1.0)}


@dataclass(frozen=True)
class IdentityCheck:
    """항등식 계열별 검증 결과"""
    family: str
    passed: bool
    max_error: float
    samples: int

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.family} max_error={self.max_error:.3e} samples={self.samples}"


def _random_multivectors(generator: np.random.Generator, n: int) -> np.ndarray:
    return generator.uniform(-1.0, 1.0, size=(n, 8))


def _random_unit_vectors(generator: np.random.Generator, n: int) -> np.ndarray:
    values = generator.normal(size=(n, 3))
    return values / np.linalg.norm(values, axis=1, keepdims=True)


def _embed(vectors: np.ndarray, slots: Tuple[int, ...]) -> np.ndarray:
    coefficients = np.zeros((len(vectors), 8))
    coefficients[:, list(slots)] = vectors
    return coefficients


def check_associativity(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    a, b, c = (_random_multivectors(generator, n) for _ in range(3))
    error = np.abs(batch_gp(a, batch_gp(b, c)) - batch_gp(batch_gp(a, b), c))
    return float(error.max()), n


def check_distributivity(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    a, b, c = (_random_multivectors(generator, n) for _ in range(3))
    error = np.abs(batch_gp(a, b + c) - (batch_gp(a, b) + batch_gp(a, c)))
    return float(error.max()), n


def check_grade_decomposition(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    worst = 0.0
    for row in _random_multivectors(generator, n):
        value = Multivector(row)
        parts = [grade(value, k).coefficients for k in range(4)]
        overlap = sum(np.count_nonzero(p) for p in parts) - np.count_nonzero(row)
        worst = max(worst, float(np.max(np.abs(sum(parts) - row))), float(abs(overlap)))
    return worst, n


def check_basis_table(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    """gp(μ·e_j, μ·e_k) = -δ_jk - ε_jkl (μ·e_l), 양쪽 방향성"""
    worst = 0.0
    count = 0
    for lam in (1, -1):
        basis = [inner(mu(lam), Multivector.blade(slot), lam) for slot in (1, 2, 3)]
        for j in range(3):
            for k in range(3):
                expected = Multivector.scalar(-1.0 if j == k else 0.0)
                if (j, k) in LEVI_CIVITA:
                    l, sign = LEVI_CIVITA[(j, k)]
                    expected = expected - basis[l] * sign
                worst = max(worst, (gp(basis[j], basis[k], lam) - expected).max_abs())
                count += 1
    return worst, count


def check_bivector_identity(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    """(I·a)(I·b) + a·b + I·(a×b) = 0"""
    a = _random_unit_vectors(generator, n)
    b = _random_unit_vectors(generator, n)
    product = batch_gp(_embed(a, BIVECTOR_SLOTS), _embed(b, BIVECTOR_SLOTS))
    product[:, SCALAR] += np.sum(a * b, axis=1)
    product += _embed(np.cross(a, b), BIVECTOR_SLOTS)
    return float(np.abs(product).max()), n


def check_duality(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    """a∧b = μ·(a×b), 양쪽 방향성 (λ = -1 은 왼손 기저표)"""
    a = _random_unit_vectors(generator, n)
    b = _random_unit_vectors(generator, n)
    left, right = _embed(a, (1, 2, 3)), _embed(b, (1, 2, 3))
    worst = 0.0
    for lam in (1, -1):
        first, second = (left, right) if lam == 1 else (right, left)
        wedged = np.einsum("...i,...j,ijk->...k", first, second, WEDGE_TABLE)
        expected = lam * _embed(np.cross(a, b), BIVECTOR_SLOTS)
        worst = max(worst, float(np.abs(wedged - expected).max()))
    return worst, 2 * n


def check_unit_quaternion_closure(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    def unit_quaternions() -> np.ndarray:
        raw = generator.normal(size=(n, 4))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        return _embed(raw, (SCALAR,) + BIVECTOR_SLOTS)

    product = batch_gp(unit_quaternions(), unit_quaternions())
    odd = float(np.abs(product[:, [1, 2, 3, 7]]).max())
    norms = np.sqrt(np.sum(product * product, axis=1))
    return max(odd, float(np.abs(norms - 1.0).max())), n


def check_outcome_grid(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    """1° 격자 360개 각도 × λ: 𝒜 = λ, 𝔅 = -λ, 𝒜𝔅 = -1"""
    mismatches = 0
    for degree in range(360):
        angle = math.radians(degree)
        for lam in (1, -1):
            a, b = raw_score_A(angle, lam), raw_score_B(angle, lam)
            mismatches += int(a != lam) + int(b != -lam) + int(a * b != -1)
    return float(mismatches), 720


def check_score_product(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    """점수 곱의 닫힌 형태와 단위 노름 (15° 격자)"""
    worst = 0.0
    count = 0
    for alpha_deg in range(0, 360, 15):
        for beta_deg in range(0, 360, 15):
            for lam in (1, -1):
                product = score_product(math.radians(alpha_deg), math.radians(beta_deg), lam)
                worst = max(worst, abs(product.norm() - 1.0))
                count += 1
    return worst, count


def check_bound_agreement(generator: np.random.Generator, n: int) -> Tuple[float, int]:
    """사인 경계 = 교차곱 경계, 0 ≤ 경계 ≤ 2√2"""
    worst = 0.0
    for angles in generator.uniform(0.0, 2.0 * math.pi, size=(n, 4)):
        quad = AngleQuad(*angles.tolist())
        sine, cross = chsh_bound_sine(quad), chsh_bound_cross(quad)
        out_of_range = max(0.0, -sine, sine - QM_LIMIT)
        worst = max(worst, abs(sine - cross), out_of_range)
    return worst, n


FAMILIES: List[Tuple[str, Callable[[np.random.Generator, int], Tuple[float, int]]]] = [
    ("associativity", check_associativity),
    ("distributivity", check_distributivity),
    ("grade_decomposition", check_grade_decomposition),
    ("basis_table", check_basis_table),
    ("bivector_identity", check_bivector_identity),
    ("duality", check_duality),
    ("unit_quaternion_closure", check_unit_quaternion_closure),
    ("outcome_grid", check_outcome_grid),
    ("score_product", check_score_product),
    ("bound_agreement", check_bound_agreement),
]


def run_identity_suite(samples: int = 10_000, seed: int = 2024, tolerance: float = 1e-12) -> List[IdentityCheck]:
    """
    항등식 계열 전체 검증

    Args:
        samples: 계열별 무작위 표본 수
        seed: 표본 생성 시드
        tolerance: 허용 오차

    Returns:
        계열별 IdentityCheck 리스트
    """
    if samples < 1:
        raise ValueError(f"표본 수는 1 이상이어야 합니다: {samples}")

    generator = np.random.default_rng(seed)
    results = []
    for family, check in FAMILIES:
        try:
            max_error, count = check(generator, samples)
            passed = max_error <= tolerance
        except RuntimeError as e:
            logger.error(f"{family} 검증 중 대수 오류: {e}")
            max_error, count, passed = float("inf"), samples, False
        results.append(IdentityCheck(family, passed, max_error, count))
        logger.debug(f"{family}: 최대 오차 {max_error:.3e}")

    failed = [r.family for r in results if not r.passed]
    if failed:
        logger.warning(f"항등식 검증 실패: {failed}")
    else:
        logger.info(f"항등식 검증 완료: {len(results)}개 계열 모두 통과")
    return results
