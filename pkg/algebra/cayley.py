"""블레이드 기저와 Cayley 곱셈표 생성 모듈"""

from typing import Dict, Tuple
import numpy as np

# 고정 기저 순서: 1, e1, e2, e3, e23, e31, e12, e123
# 쌍벡터 슬롯 k 는 벡터 슬롯 k 의 쌍대 (I·e_j 는 슬롯 복사)
BLADES: Tuple[Tuple[int, ...], ...] = (
    (),
    (1,),
    (2,),
    (3,),
    (2, 3),
    (3, 1),
    (1, 2),
    (1, 2, 3),
)

BLADE_NAMES: Tuple[str, ...] = ("1", "e1", "e2", "e3", "e23", "e31", "e12", "e123")

GRADES: Tuple[int, ...] = tuple(len(blade) for blade in BLADES)

SCALAR = 0
VECTOR_SLOTS = (1, 2, 3)
BIVECTOR_SLOTS = (4, 5, 6)
PSEUDOSCALAR = 7


def canonical_blade(blade: Tuple[int, ...]) -> Tuple[Tuple[int, ...], int]:
    """
    블레이드를 정렬된 형태로 변환 (버블 정렬로 부호 추적)

    Args:
        blade: 기저 벡터 인덱스 튜플 (예: (3, 1))

    Returns:
        (정렬된 블레이드, 부호)
    """
    indices = list(blade)
    sign = 1
    for i in range(len(indices)):
        for j in range(len(indices) - 1 - i):
            if indices[j] > indices[j + 1]:
                indices[j], indices[j + 1] = indices[j + 1], indices[j]
                sign = -sign
    return tuple(indices), sign


def multiply_blades(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[Tuple[int, ...], int]:
    """
    두 블레이드의 기하곱 (유클리드 계량, e_i e_i = +1)

    Args:
        a: 왼쪽 블레이드
        b: 오른쪽 블레이드

    Returns:
        (정렬된 결과 블레이드, 부호)
    """
    indices = list(a) + list(b)
    sign = 1

    changed = True
    while changed:
        changed = False
        for i in range(len(indices) - 1):
            if indices[i] > indices[i + 1]:
                indices[i], indices[i + 1] = indices[i + 1], indices[i]
                sign = -sign
                changed = True
            elif indices[i] == indices[i + 1]:
                del indices[i:i + 2]
                changed = True
                break

    return tuple(indices), sign


def _blade_lookup() -> Dict[Tuple[int, ...], Tuple[int, int]]:
    """정렬된 블레이드 → (기저 인덱스, 저장 형태 부호)"""
    lookup = {}
    for index, blade in enumerate(BLADES):
        canonical, sign = canonical_blade(blade)
        lookup[canonical] = (index, sign)
    return lookup


def build_cayley_tensor() -> np.ndarray:
    """
    Cayley 부호 텐서 생성

    T[i, j, k] = s 이면 blade_i * blade_j = s * blade_k

    Returns:
        (8, 8, 8) 실수 배열
    """
    lookup = _blade_lookup()
    tensor = np.zeros((8, 8, 8), dtype=float)

    for i, left in enumerate(BLADES):
        for j, right in enumerate(BLADES):
            product, sign = multiply_blades(left, right)
            index, stored_sign = lookup[product]
            # e31 은 정렬 형태 e13 의 -1 배
            tensor[i, j, index] = sign * stored_sign

    return tensor


def build_grade_mask(rule: str) -> np.ndarray:
    """
    등급 규칙에 맞는 Cayley 항만 남기는 마스크

    Args:
        rule: "wedge" (등급 r+s) 또는 "inner" (등급 |r-s|)

    Returns:
        (8, 8, 8) 0/1 배열
    """
    mask = np.zeros((8, 8, 8), dtype=float)
    for i in range(8):
        for j in range(8):
            if rule == "wedge":
                target = GRADES[i] + GRADES[j]
            elif rule == "inner":
                target = abs(GRADES[i] - GRADES[j])
            else:
                raise ValueError(f"알 수 없는 등급 규칙: {rule}")
            for k in range(8):
                if GRADES[k] == target:
                    mask[i, j, k] = 1.0
    return mask


CAYLEY = build_cayley_tensor()
WEDGE_TABLE = CAYLEY * build_grade_mask("wedge")
INNER_TABLE = CAYLEY * build_grade_mask("inner")

for _table in (CAYLEY, WEDGE_TABLE, INNER_TABLE):
    _table.setflags(write=False)
