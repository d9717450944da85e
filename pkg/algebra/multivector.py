"""3차원 유클리드 공간의 기하대수 Cl(3,0) 커널

8개 계수 멀티벡터와 벡터/쌍벡터/쿼터니언 보조 타입, 기하곱과 등급 연산을 제공한다.
방향성 λ 는 값에 저장하지 않고 호출 지점의 orientation 인자로 전달한다.
λ = -1 은 왼손 기저표로, 반대 대수 gp₋(a, b) = gp(b, a) 로 구현된다.
"""

from dataclasses import dataclass
from typing import Iterable, Union
import math
import numpy as np
from algebra.cayley import (
    BLADE_NAMES,
    BIVECTOR_SLOTS,
    CAYLEY,
    GRADES,
    INNER_TABLE,
    PSEUDOSCALAR,
    SCALAR,
    VECTOR_SLOTS,
    WEDGE_TABLE,
)

IDENTITY_TOLERANCE = 1e-12

_REVERSE_SIGNS = np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0])
_GRADE_INDEX = np.array(GRADES)


def check_orientation(orientation: int) -> int:
    """
    방향성 값 검증

    Args:
        orientation: λ (+1 오른손, -1 왼손)

    Returns:
        정수 λ

    Raises:
        ValueError: λ 가 ±1 이 아닐 때
    """
    value = int(orientation)
    if value not in (1, -1) or value != orientation:
        raise ValueError(f"방향성은 +1 또는 -1 이어야 합니다: {orientation}")
    return value


class Multivector:
    """8개 블레이드 계수로 표현한 불변 멀티벡터"""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Iterable[float]):
        """
        멀티벡터 생성

        Args:
            coefficients: (1, e1, e2, e3, e23, e31, e12, e123) 순서의 계수 8개

        Raises:
            ValueError: 계수 개수가 8이 아니거나 유한하지 않을 때
        """
        values = np.array(coefficients, dtype=float).reshape(-1)
        if values.shape != (8,):
            raise ValueError(f"멀티벡터 계수는 8개여야 합니다: {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"멀티벡터 계수가 유한하지 않습니다: {values}")
        values.setflags(write=False)
        self._coefficients = values

    @classmethod
    def zero(cls) -> "Multivector":
        return cls(np.zeros(8))

    @classmethod
    def scalar(cls, value: float) -> "Multivector":
        coefficients = np.zeros(8)
        coefficients[SCALAR] = value
        return cls(coefficients)

    @classmethod
    def blade(cls, index: int, value: float = 1.0) -> "Multivector":
        coefficients = np.zeros(8)
        coefficients[index] = value
        return cls(coefficients)

    @property
    def coefficients(self) -> np.ndarray:
        """읽기 전용 계수 배열"""
        return self._coefficients

    @property
    def scalar_part(self) -> float:
        return float(self._coefficients[SCALAR])

    @property
    def vector_part(self) -> "Vector3":
        return Vector3(*(float(self._coefficients[i]) for i in VECTOR_SLOTS))

    @property
    def bivector_part(self) -> "Bivector":
        return Bivector(*(float(self._coefficients[i]) for i in BIVECTOR_SLOTS))

    @property
    def pseudoscalar_part(self) -> float:
        return float(self._coefficients[PSEUDOSCALAR])

    def __getitem__(self, index: int) -> float:
        return float(self._coefficients[index])

    def __add__(self, other: "MultivectorLike") -> "Multivector":
        return Multivector(self._coefficients + as_multivector(other).coefficients)

    __radd__ = __add__

    def __sub__(self, other: "MultivectorLike") -> "Multivector":
        return Multivector(self._coefficients - as_multivector(other).coefficients)

    def __rsub__(self, other: "MultivectorLike") -> "Multivector":
        return Multivector(as_multivector(other).coefficients - self._coefficients)

    def __neg__(self) -> "Multivector":
        return Multivector(-self._coefficients)

    def __mul__(self, other: "MultivectorLike") -> "Multivector":
        if isinstance(other, (int, float)):
            return Multivector(self._coefficients * float(other))
        return gp(self, other)

    def __rmul__(self, other: "MultivectorLike") -> "Multivector":
        if isinstance(other, (int, float)):
            return Multivector(self._coefficients * float(other))
        return gp(other, self)

    def __truediv__(self, value: float) -> "Multivector":
        return Multivector(self._coefficients / float(value))

    def __xor__(self, other: "MultivectorLike") -> "Multivector":
        return wedge(self, other)

    def __or__(self, other: "MultivectorLike") -> "Multivector":
        return inner(self, other)

    def __invert__(self) -> "Multivector":
        return reverse(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return bool(np.array_equal(self._coefficients, other._coefficients))

    def __hash__(self) -> int:
        return hash(tuple(self._coefficients.tolist()))

    def is_close(self, other: "MultivectorLike", tolerance: float = IDENTITY_TOLERANCE) -> bool:
        """
        성분별 근사 비교

        Args:
            other: 비교 대상
            tolerance: 허용 오차

        Returns:
            모든 성분 차이가 허용 오차 이하인지 여부
        """
        difference = self._coefficients - as_multivector(other).coefficients
        return bool(np.max(np.abs(difference)) <= tolerance)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._coefficients)))

    def to_text(self) -> str:
        """
        골든 파일용 텍스트 표현 (유효숫자 17자리)

        Returns:
            "s + x e1 + ... + p e123" 형식 문자열
        """
        terms = []
        for value, name in zip(self._coefficients, BLADE_NAMES):
            # -0.0 은 0 으로 출력
            text = format(float(value) + 0.0, ".17g")
            terms.append(text if name == "1" else f"{text} {name}")
        return " + ".join(terms)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Multivector({self.to_text()})"


@dataclass(frozen=True)
class Vector3:
    """등급 1 벡터 (e1, e2, e3 계수)"""
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def to_multivector(self) -> Multivector:
        coefficients = np.zeros(8)
        coefficients[list(VECTOR_SLOTS)] = self.as_array()
        return Multivector(coefficients)

    def dot(self, other: "Vector3") -> float:
        return float(np.dot(self.as_array(), other.as_array()))

    def cross(self, other: "Vector3") -> "Vector3":
        return Vector3(*np.cross(self.as_array(), other.as_array()).tolist())

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def normalized(self) -> "Vector3":
        length = self.norm()
        if length == 0.0:
            raise ValueError("영벡터는 정규화할 수 없습니다")
        return Vector3(self.x / length, self.y / length, self.z / length)

    def scaled(self, factor: float) -> "Vector3":
        return Vector3(self.x * factor, self.y * factor, self.z * factor)

    def dual(self) -> "Bivector":
        """I·v (슬롯 복사)"""
        return Bivector(self.x, self.y, self.z)

    def is_unit(self, tolerance: float = 1e-9) -> bool:
        return abs(self.norm() - 1.0) <= tolerance

    def __neg__(self) -> "Vector3":
        return Vector3(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class Bivector:
    """등급 2 쌍벡터 (e23, e31, e12 계수)"""
    yz: float
    zx: float
    xy: float

    def as_array(self) -> np.ndarray:
        return np.array([self.yz, self.zx, self.xy], dtype=float)

    def to_multivector(self) -> Multivector:
        coefficients = np.zeros(8)
        coefficients[list(BIVECTOR_SLOTS)] = self.as_array()
        return Multivector(coefficients)

    @classmethod
    def from_multivector(cls, value: Multivector, tolerance: float = IDENTITY_TOLERANCE) -> "Bivector":
        """
        멀티벡터에서 쌍벡터 추출

        Raises:
            ValueError: 쌍벡터 이외의 성분이 허용 오차를 넘을 때
        """
        others = np.delete(value.coefficients, list(BIVECTOR_SLOTS))
        if np.max(np.abs(others)) > tolerance:
            raise ValueError(f"쌍벡터가 아닙니다: {value.to_text()}")
        return value.bivector_part

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def scaled(self, factor: float) -> "Bivector":
        return Bivector(self.yz * factor, self.zx * factor, self.xy * factor)

    def axis(self) -> Vector3:
        """I·n = B 를 만족하는 벡터 n"""
        return Vector3(self.yz, self.zx, self.xy)

    def is_unit(self, tolerance: float = 1e-9) -> bool:
        return abs(self.norm() - 1.0) <= tolerance

    def __neg__(self) -> "Bivector":
        return Bivector(-self.yz, -self.zx, -self.xy)

    def __add__(self, other: "Bivector") -> "Bivector":
        return Bivector(self.yz + other.yz, self.zx + other.zx, self.xy + other.xy)

    def __sub__(self, other: "Bivector") -> "Bivector":
        return Bivector(self.yz - other.yz, self.zx - other.zx, self.xy - other.xy)


@dataclass(frozen=True)
class Quaternion:
    """짝수 부분대수 원소 (스칼라 + 쌍벡터)"""
    scalar: float
    bivector: Bivector

    def to_multivector(self) -> Multivector:
        coefficients = np.zeros(8)
        coefficients[SCALAR] = self.scalar
        coefficients[list(BIVECTOR_SLOTS)] = self.bivector.as_array()
        return Multivector(coefficients)

    @classmethod
    def from_multivector(cls, value: Multivector, tolerance: float = IDENTITY_TOLERANCE) -> "Quaternion":
        """
        멀티벡터에서 쿼터니언 추출

        Raises:
            ValueError: 홀수 등급 성분이 허용 오차를 넘을 때
        """
        odd = value.coefficients[list(VECTOR_SLOTS) + [PSEUDOSCALAR]]
        if np.max(np.abs(odd)) > tolerance:
            raise ValueError(f"쿼터니언이 아닙니다: {value.to_text()}")
        return cls(value.scalar_part, value.bivector_part)

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, Bivector(0.0, 0.0, 0.0))

    def norm(self) -> float:
        return math.sqrt(self.scalar ** 2 + self.bivector.norm() ** 2)

    def is_unit(self, tolerance: float = 1e-9) -> bool:
        return abs(self.norm() - 1.0) <= tolerance

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.scalar + other.scalar, self.bivector + other.bivector)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.scalar - other.scalar, self.bivector - other.bivector)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.scalar, -self.bivector)


MultivectorLike = Union[Multivector, Vector3, Bivector, Quaternion, float, int]


def as_multivector(value: MultivectorLike) -> Multivector:
    """
    멀티벡터로 변환

    Args:
        value: 멀티벡터, 보조 타입 또는 실수

    Returns:
        Multivector
    """
    if isinstance(value, Multivector):
        return value
    if isinstance(value, (Vector3, Bivector, Quaternion)):
        return value.to_multivector()
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Multivector.scalar(float(value))
    raise ValueError(f"멀티벡터로 변환할 수 없는 타입: {type(value).__name__}")


def _apply(table: np.ndarray, a: MultivectorLike, b: MultivectorLike, orientation: int) -> Multivector:
    left = as_multivector(a).coefficients
    right = as_multivector(b).coefficients
    if check_orientation(orientation) == -1:
        left, right = right, left
    return Multivector(np.einsum("i,j,ijk->k", left, right, table))


def gp(a: MultivectorLike, b: MultivectorLike, orientation: int = 1) -> Multivector:
    """
    기하곱

    Args:
        a: 왼쪽 인자
        b: 오른쪽 인자
        orientation: λ (-1 이면 왼손 기저표)

    Returns:
        a b
    """
    return _apply(CAYLEY, a, b, orientation)


def wedge(a: MultivectorLike, b: MultivectorLike, orientation: int = 1) -> Multivector:
    """외적 (등급 r+s 성분)"""
    return _apply(WEDGE_TABLE, a, b, orientation)


def inner(a: MultivectorLike, b: MultivectorLike, orientation: int = 1) -> Multivector:
    """내적 (등급 |r-s| 성분)"""
    return _apply(INNER_TABLE, a, b, orientation)


def batch_gp(a: np.ndarray, b: np.ndarray, orientation: int = 1) -> np.ndarray:
    """
    배열 단위 기하곱

    Args:
        a: (..., 8) 계수 배열
        b: (..., 8) 계수 배열 (브로드캐스트 가능)
        orientation: λ

    Returns:
        (..., 8) 계수 배열
    """
    if check_orientation(orientation) == -1:
        a, b = b, a
    return np.einsum("...i,...j,ijk->...k", a, b, CAYLEY)


def grade(a: MultivectorLike, k: int) -> Multivector:
    """
    등급 투영

    Raises:
        ValueError: k 가 0..3 범위를 벗어날 때
    """
    if k not in (0, 1, 2, 3):
        raise ValueError(f"등급은 0~3 이어야 합니다: {k}")
    coefficients = as_multivector(a).coefficients
    return Multivector(np.where(_GRADE_INDEX == k, coefficients, 0.0))


def reverse(a: MultivectorLike) -> Multivector:
    return Multivector(as_multivector(a).coefficients * _REVERSE_SIGNS)


def norm_squared(a: MultivectorLike) -> float:
    """reverse(a)·a 의 스칼라 부분 (유클리드 계량에서 계수 제곱합)"""
    value = as_multivector(a)
    return gp(reverse(value), value).scalar_part


def norm(a: MultivectorLike) -> float:
    return math.sqrt(max(norm_squared(a), 0.0))


def inverse(a: MultivectorLike, tolerance: float = IDENTITY_TOLERANCE) -> Multivector:
    """
    버서(versor) 역원 reverse(a) / ‖a‖²

    Args:
        a: 역원을 구할 원소
        tolerance: 버서 판정 허용 오차

    Returns:
        gp(inverse(a), a) = 1 을 만족하는 원소

    Raises:
        ValueError: 영원소이거나 버서가 아닐 때
    """
    value = as_multivector(a)
    product = gp(value, reverse(value))
    magnitude = product.scalar_part
    if magnitude <= tolerance:
        raise ValueError(f"역원이 없는 원소입니다 (노름 0): {value.to_text()}")
    residual = np.max(np.abs(product.coefficients[1:]))
    if residual > tolerance * max(1.0, magnitude):
        raise ValueError(f"버서가 아닌 원소는 역원을 계산할 수 없습니다: {value.to_text()}")
    return reverse(value) / magnitude


def commutator(x: MultivectorLike, y: MultivectorLike, orientation: int = 1) -> Multivector:
    """[x, y] = xy - yx"""
    return gp(x, y, orientation) - gp(y, x, orientation)


def dot(a: Vector3, b: Vector3) -> float:
    return a.dot(b)


def cross(a: Vector3, b: Vector3) -> Vector3:
    return a.cross(b)


def dual(v: Vector3) -> Bivector:
    """I·v"""
    return v.dual()


def mu(orientation: int) -> Multivector:
    """은닉 변수 μ = λI"""
    return Multivector.blade(PSEUDOSCALAR, float(check_orientation(orientation)))


ONE = Multivector.scalar(1.0)
E1 = Multivector.blade(1)
E2 = Multivector.blade(2)
E3 = Multivector.blade(3)
E23 = Multivector.blade(4)
E31 = Multivector.blade(5)
E12 = Multivector.blade(6)
I = Multivector.blade(PSEUDOSCALAR)

EX = Vector3(1.0, 0.0, 0.0)
EY = Vector3(0.0, 1.0, 0.0)
EZ = Vector3(0.0, 0.0, 1.0)
