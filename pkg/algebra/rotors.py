"""쿼터니언 항등식, 로터 생성과 평행 이동"""

import math
from algebra.multivector import (
    Bivector,
    IDENTITY_TOLERANCE,
    Quaternion,
    Vector3,
    gp,
)
from utils.logger import get_logger

logger = get_logger(__name__)

PLANE_TOLERANCE = 1e-9


def bivector_identity(a: Vector3, b: Vector3) -> Quaternion:
    """
    (I·a)(I·b) = -a·b - I·(a×b) 항등식 계산

    Args:
        a: 첫 번째 벡터
        b: 두 번째 벡터

    Returns:
        gp(I·a, I·b) 쿼터니언

    Raises:
        RuntimeError: 닫힌 형태와 성분이 일치하지 않을 때
    """
    product = gp(a.dual(), b.dual())
    expected = Quaternion(-a.dot(b), -a.cross(b).dual())
    scale = max(1.0, a.norm() * b.norm())
    if not product.is_close(expected.to_multivector(), IDENTITY_TOLERANCE * scale):
        raise RuntimeError(f"쌍벡터 항등식 불일치: {product.to_text()}")
    return Quaternion.from_multivector(product, IDENTITY_TOLERANCE * scale)


def rotor_exp(plane: Bivector, theta: float) -> Quaternion:
    """
    단위 평면 위의 로터 cosθ + B sinθ

    Args:
        plane: 단위 쌍벡터 평면
        theta: 각도 (라디안)

    Returns:
        단위 쿼터니언

    Raises:
        ValueError: 평면 노름이 1 이 아니거나 각도가 유한하지 않을 때
    """
    if not math.isfinite(theta):
        raise ValueError(f"로터 각도가 유한하지 않습니다: {theta}")
    if not plane.is_unit(PLANE_TOLERANCE):
        raise ValueError(f"로터 평면은 단위 쌍벡터여야 합니다: 노름 {plane.norm()}")
    return Quaternion(math.cos(theta), plane.scaled(math.sin(theta)))


def rotor_compose(r1: Quaternion, r2: Quaternion, orientation: int = 1) -> Quaternion:
    """r1 r2 합성"""
    return Quaternion.from_multivector(gp(r1, r2, orientation))


def transport(q: Quaternion, r: Quaternion, orientation: int = 1) -> Quaternion:
    """
    로터 r 로 쿼터니언 q 를 평행 이동 (왼쪽 곱)

    Args:
        q: 이동할 쿼터니언
        r: 로터
        orientation: λ

    Returns:
        r q
    """
    return Quaternion.from_multivector(gp(r, q, orientation))


def rotor_between(a: Vector3, b: Vector3, orientation: int = 1) -> Quaternion:
    """R_ab = a b"""
    return Quaternion.from_multivector(gp(a, b, orientation))


def rotation_plane(a: Vector3, b: Vector3) -> Bivector:
    """
    두 벡터가 이루는 회전 평면 I·c (c = a×b / |a×b|)

    Raises:
        ValueError: 두 벡터가 평행할 때
    """
    axis = a.cross(b)
    if axis.norm() <= IDENTITY_TOLERANCE:
        raise ValueError("평행한 두 벡터의 회전 평면은 정의되지 않습니다")
    return axis.normalized().dual()


def angle_between(a: Vector3, b: Vector3) -> float:
    """두 벡터 사이 각도 (0..π)"""
    return math.atan2(a.cross(b).norm(), a.dot(b))
