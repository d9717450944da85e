"""극한 쿼터니언과 로터 평행 이동 예측"""

import math
from algebra.multivector import (
    E12,
    IDENTITY_TOLERANCE,
    Multivector,
    Quaternion,
    check_orientation,
    gp,
)
from algebra.rotors import rotor_between, transport
from model.orientation import setting_vector
from model.scores import mu_dot
from utils.logger import get_logger

logger = get_logger(__name__)


def _closed_form(orientation: int, theta: float) -> Multivector:
    """-λ{cosθ + (μ·e_z) sinθ}"""
    lam = check_orientation(orientation)
    return Multivector.scalar(-lam * math.cos(theta)) + E12 * (-math.sin(theta))


def limiting_quaternion(alpha: float, alpha_prime: float, orientation: int) -> Quaternion:
    """
    (+I·ã)(μ·ã′) 극한 쿼터니언

    회전축은 e_z, θ 는 ã 에서 ã′ 까지의 부호 있는 각도 2(α′-α).

    Args:
        alpha: 기준 각도 (라디안)
        alpha_prime: 두 번째 각도 (라디안)
        orientation: λ

    Returns:
        -λ{cosθ + (μ·e_z) sinθ}, α′ = α 이면 -λ

    Raises:
        RuntimeError: 닫힌 형태와 다를 때
    """
    lam = check_orientation(orientation)
    product = gp(setting_vector(alpha).dual(), mu_dot(alpha_prime, lam), lam)
    expected = _closed_form(lam, 2.0 * (alpha_prime - alpha))
    if not product.is_close(expected):
        raise RuntimeError(f"극한 쿼터니언이 닫힌 형태와 다릅니다: {product.to_text()}")
    return Quaternion.from_multivector(product)


def transported_quaternion(alpha: float, alpha_prime: float, beta: float, orientation: int) -> Quaternion:
    """
    극한 쿼터니언을 R_ãb̃ = ã b̃ 로 평행 이동

    Args:
        alpha: A 각도 (라디안)
        alpha_prime: 보조 A 각도 (라디안)
        beta: B 각도 (라디안)
        orientation: λ

    Returns:
        -λ{cos(θ_ab + θ_aa′) + (μ·e_z) sin(θ_ab + θ_aa′)}

    Raises:
        RuntimeError: 각도 합 법칙이 성립하지 않을 때
    """
    lam = check_orientation(orientation)
    rotor = rotor_between(setting_vector(alpha), setting_vector(beta), lam)
    moved = transport(limiting_quaternion(alpha, alpha_prime, lam), rotor, lam)
    theta = 2.0 * (beta - alpha) + 2.0 * (alpha_prime - alpha)
    if not moved.to_multivector().is_close(_closed_form(lam, theta)):
        raise RuntimeError(f"평행 이동 각도 합 법칙 불일치: {moved.to_multivector().to_text()}")
    return moved


def rotor_transport_prediction(alpha: float, beta: float, orientation: int) -> float:
    """
    로터 평행 이동 예측 -λ cos2(α-β)

    ã′ → ã 극한을 θ_aa′ = 0 에서 평가하고 소멸하는 쌍벡터 항은 버린다.

    Args:
        alpha: A 각도 (라디안)
        beta: B 각도 (라디안)
        orientation: λ

    Returns:
        스칼라 예측값
    """
    moved = transported_quaternion(alpha, alpha, beta, orientation)
    logger.debug(f"평행 이동 쌍벡터 항 제거: {moved.bivector.norm():.3e}")
    return moved.scalar
