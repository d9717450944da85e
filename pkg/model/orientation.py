"""은닉 변수(방향성)와 편광자 설정"""

from dataclasses import dataclass
from enum import IntEnum
import math
from algebra.multivector import Multivector, Vector3, mu
from utils.logger import get_logger

logger = get_logger(__name__)


class Orientation(IntEnum):
    """공간 방향성 λ (μ = λI)"""
    RIGHT = 1
    LEFT = -1

    @property
    def lam(self) -> int:
        return int(self.value)

    @property
    def mu(self) -> Multivector:
        return mu(self.value)

    @classmethod
    def from_bit(cls, bit: int) -> "Orientation":
        """난수 비트 1 → +1, 0 → -1"""
        return cls.RIGHT if bit else cls.LEFT


def setting_vector(angle: float) -> Vector3:
    """
    회전 설정 벡터 e_x cos2θ + e_y sin2θ

    Args:
        angle: 편광자 각도 (라디안)

    Returns:
        e_x-e_y 평면 위의 단위 벡터

    Raises:
        ValueError: 각도가 유한하지 않을 때
    """
    if not math.isfinite(angle):
        raise ValueError(f"각도는 유한해야 합니다: {angle}")
    return Vector3(math.cos(2.0 * angle), math.sin(2.0 * angle), 0.0)



@dataclass(frozen=True)
class PolarizerSetting:
    """편광자 설정 (내부 각도는 라디안)"""
    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ValueError(f"각도는 유한해야 합니다: {self.angle}")

    @classmethod
    def from_degrees(cls, degrees: float) -> "PolarizerSetting":
        return cls(math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.angle)

    @property
    def vector(self) -> Vector3:
        return setting_vector(self.angle)
