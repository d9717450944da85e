"""기하대수 커널 테스트"""

import math
import pytest
import numpy as np
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from hypothesis import given, settings, strategies as st

from algebra.cayley import BLADES, CAYLEY, GRADES, multiply_blades
from algebra.multivector import (
    E1,
    E2,
    E3,
    E12,
    E23,
    E31,
    EX,
    EY,
    EZ,
    I,
    ONE,
    Bivector,
    Multivector,
    Quaternion,
    Vector3,
    batch_gp,
    check_orientation,
    commutator,
    gp,
    grade,
    inner,
    inverse,
    mu,
    norm,
    reverse,
    wedge,
)
from algebra.rotors import (
    angle_between,
    bivector_identity,
    rotation_plane,
    rotor_between,
    rotor_compose,
    rotor_exp,
    transport,
)

coefficient = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
multivectors = st.lists(coefficient, min_size=8, max_size=8).map(Multivector)
components = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)
vectors = st.builds(Vector3, components, components, components)


def _bitmask_product(a: int, b: int):
    """비트마스크 블레이드 곱 (교환 횟수로 부호 계산)"""
    swaps = 0
    shifted = a >> 1
    while shifted:
        swaps += bin(shifted & b).count("1")
        shifted >>= 1
    return a ^ b, -1 if swaps % 2 else 1


# 저장 순서 블레이드 → (비트마스크, e31 = -e13 부호)
STORED = {0: (0b000, 1), 1: (0b001, 1), 2: (0b010, 1), 3: (0b100, 1),
          4: (0b110, 1), 5: (0b101, -1), 6: (0b011, 1), 7: (0b111, 1)}


@pytest.fixture
def fuzz():
    """무작위 멀티벡터 표본"""
    generator = np.random.default_rng(42)
    return generator.uniform(-1.0, 1.0, size=(200, 8))


def test_cayley_matches_bitmask_oracle():
    """Cayley 텐서가 비트마스크 독립 계산과 일치"""
    by_mask = {mask: (index, sign) for index, (mask, sign) in STORED.items()}
    for i in range(8):
        for j in range(8):
            mask_i, sign_i = STORED[i]
            mask_j, sign_j = STORED[j]
            mask, sign = _bitmask_product(mask_i, mask_j)
            k, sign_k = by_mask[mask]
            expected = np.zeros(8)
            expected[k] = sign * sign_i * sign_j * sign_k
            np.testing.assert_array_equal(CAYLEY[i, j], expected)


def test_blade_grades():
    """블레이드 등급"""
    assert GRADES == (0, 1, 1, 1, 2, 2, 2, 3)
    assert len(BLADES) == 8


def test_multiply_blades_cancels_repeated_vectors():
    """반복 기저 벡터 소거"""
    assert multiply_blades((1, 2), (2, 1)) == ((), 1)
    assert multiply_blades((1, 2), (1, 2)) == ((), -1)
    assert multiply_blades((1,), (1,)) == ((), 1)
    assert multiply_blades((3,), (1,)) == ((1, 3), -1)


def test_basis_relations_right_handed():
    """오른손 기저표 e1e2 = e12, I² = -1"""
    assert gp(E1, E2) == E12
    assert gp(E2, E3) == E23
    assert gp(E3, E1) == E31
    assert gp(gp(E1, E2), E3) == I
    assert gp(I, I) == -ONE
    assert gp(E12, E12) == -ONE


def test_basis_relations_left_handed():
    """왼손 기저표는 반대 대수 (e1e2 = -e12)"""
    assert gp(E1, E2, -1) == -E12
    assert gp(E2, E3, -1) == -E23
    assert gp(E12, E12, -1) == -ONE


def test_orientation_must_be_unit():
    """λ 는 ±1"""
    with pytest.raises(ValueError):
        check_orientation(0)
    with pytest.raises(ValueError):
        gp(E1, E2, 2)
    assert check_orientation(-1) == -1


def test_inner_and_wedge_examples():
    """내적/외적 예시"""
    assert inner(I, E3) == E12
    assert wedge(E1, E2) == E12
    assert wedge(E1, E1) == Multivector.zero()
    assert inner(E1, E1) == ONE


@given(vectors, vectors)
@settings(max_examples=200, deadline=None)
def test_vector_product_splits_into_inner_and_wedge(a, b):
    """벡터 곱 = 내적 + 외적, a∧b = I·(a×b)"""
    product = gp(a, b)
    assert product.is_close(inner(a, b) + wedge(a, b), 1e-9)
    assert wedge(a, b).is_close(gp(I, a.cross(b)), 1e-9)
    assert inner(a, b).scalar_part == pytest.approx(a.dot(b), abs=1e-9)


@given(multivectors, multivectors, multivectors)
@settings(max_examples=200, deadline=None)
def test_associativity_property(a, b, c):
    """결합 법칙 (양 방향성)"""
    for lam in (1, -1):
        left = gp(gp(a, b, lam), c, lam)
        right = gp(a, gp(b, c, lam), lam)
        assert left.is_close(right, 1e-9 * max(1.0, left.max_abs()))


@given(multivectors, multivectors, multivectors)
@settings(max_examples=100, deadline=None)
def test_distributivity_property(a, b, c):
    """분배 법칙"""
    left = gp(a, b + c)
    right = gp(a, b) + gp(a, c)
    assert left.is_close(right, 1e-9 * max(1.0, left.max_abs()))


def test_grade_decomposition(fuzz):
    """등급 투영 합은 원래 원소"""
    for row in fuzz:
        value = Multivector(row)
        total = sum((grade(value, k) for k in range(4)), Multivector.zero())
        assert total == value


def test_grade_rejects_out_of_range():
    """등급 범위 밖"""
    with pytest.raises(ValueError):
        grade(E1, 4)


def test_batch_matches_single(fuzz):
    """배열 곱이 단일 곱과 일치"""
    left, right = fuzz[:100], fuzz[100:]
    batch = batch_gp(left, right, -1)
    for k in range(0, 100, 17):
        np.testing.assert_allclose(batch[k], gp(Multivector(left[k]), Multivector(right[k]), -1).coefficients, atol=1e-12)


def test_reverse_and_norm():
    """역순과 노름"""
    q = Quaternion(0.6, Bivector(0.0, 0.0, 0.8))
    assert reverse(q.to_multivector()) == Quaternion(0.6, Bivector(0.0, 0.0, -0.8)).to_multivector()
    assert norm(q.to_multivector()) == pytest.approx(1.0)
    assert (~E12) == -E12


def test_inverse_of_versor():
    """버서 역원"""
    value = gp(Vector3(1.0, 2.0, 0.5), Vector3(-0.3, 0.1, 2.0))
    assert gp(inverse(value), value).is_close(ONE)
    assert gp(inverse(E12), E12).is_close(ONE)


def test_inverse_rejects_zero_and_non_versor():
    """영원소/비버서 역원 오류"""
    with pytest.raises(ValueError):
        inverse(Multivector.zero())
    with pytest.raises(ValueError):
        inverse(ONE + E1 + E12)


def test_mu_and_commutator():
    """μ = λI 는 중심 원소"""
    for lam in (1, -1):
        assert mu(lam) == I * float(lam)
        assert commutator(mu(lam), E1, lam) == Multivector.zero()
    assert commutator(E1, E2).is_close(E12 * 2.0)


def test_operators():
    """연산자 정의"""
    assert E1 * E2 == E12
    assert (E1 ^ E2) == E12
    assert (I | E3) == E12
    assert (E1 * 2.0) / 2.0 == E1
    assert 1.0 + E1 - E1 == ONE
    assert hash(E1) == hash(Multivector.blade(1))


def test_to_text_normalizes_negative_zero():
    """골든 텍스트 -0.0 정규화"""
    text = Multivector([-0.0, 1.0, 0, 0, 0, 0, 0, 0]).to_text()
    assert text.startswith("0 + 1 e1")
    assert "-0" not in text


def test_vector_helpers():
    """Vector3/Bivector 보조 연산"""
    assert EX.cross(EY) == EZ
    assert EX.dual() == Bivector(1.0, 0.0, 0.0)
    assert Vector3(3.0, 4.0, 0.0).normalized().norm() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Vector3(0.0, 0.0, 0.0).normalized()
    assert Bivector.from_multivector(E12) == Bivector(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Quaternion.from_multivector(E1)


def test_bivector_identity():
    """(I·a)(I·b) = -a·b - I·(a×b)"""
    generator = np.random.default_rng(7)
    for _ in range(100):
        a = Vector3(*generator.normal(size=3))
        b = Vector3(*generator.normal(size=3))
        result = bivector_identity(a, b)
        assert result.scalar == pytest.approx(-a.dot(b), abs=1e-12)


def test_rotor_exp_and_compose():
    """로터 합성은 각도 덧셈"""
    plane = Bivector(0.0, 0.0, 1.0)
    first = rotor_exp(plane, 0.3)
    second = rotor_exp(plane, 0.5)
    combined = rotor_compose(first, second)
    expected = rotor_exp(plane, 0.8)
    assert combined.to_multivector().is_close(expected.to_multivector())
    assert combined.is_unit()


def test_rotor_exp_rejects_bad_input():
    """비단위 평면과 무한 각도"""
    with pytest.raises(ValueError):
        rotor_exp(Bivector(0.0, 0.0, 2.0), 0.1)
    with pytest.raises(ValueError):
        rotor_exp(Bivector(0.0, 0.0, 1.0), math.inf)


def test_rotor_between_and_transport():
    """R_ab = a b 와 평행 이동"""
    a = Vector3(1.0, 0.0, 0.0)
    b = Vector3(math.cos(0.4), math.sin(0.4), 0.0)
    rotor = rotor_between(a, b)
    assert rotor.scalar == pytest.approx(math.cos(0.4))
    assert rotor.bivector.xy == pytest.approx(math.sin(0.4))
    moved = transport(Quaternion.identity(), rotor)
    assert moved.to_multivector().is_close(rotor.to_multivector())
    assert angle_between(a, b) == pytest.approx(0.4)
    assert rotation_plane(a, b) == Bivector(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        rotation_plane(a, a)


def test_unit_quaternion_closure():
    """단위 쿼터니언 곱은 단위 쿼터니언"""
    generator = np.random.default_rng(3)
    for _ in range(200):
        p, q = generator.normal(size=4), generator.normal(size=4)
        p, q = p / np.linalg.norm(p), q / np.linalg.norm(q)
        left = Quaternion(p[0], Bivector(*p[1:]))
        right = Quaternion(q[0], Bivector(*q[1:]))
        for lam in (1, -1):
            assert rotor_compose(left, right, lam).norm() == pytest.approx(1.0, abs=1e-12)
