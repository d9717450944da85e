"""난수 계약, 통계량, 상관 추정기 테스트"""

import math
import pytest
import numpy as np
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from algebra.multivector import E12, ONE, Bivector, Multivector
from analytics.correlation import (
    coincidence_correlate,
    coincidence_counts,
    coincidence_value,
    correlate_coincidence,
    correlate_raw_normalized,
    correlate_standard,
    count_orientations,
    estimate_all,
    estimates_from_counts,
    expectation_single,
    raw_normalized_from_counts,
    raw_product_mean,
    sampled_counts,
    simulate_records,
    simulate_setting_records,
    standard_from_counts,
)
from analytics.rng import RngContract, mix64, sample_orientations
from analytics.statistics import mean_mv, std_mv, weighted_moments, zscore
from model.scores import ValidationPolicy

SPLITMIX_SEED0 = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


@pytest.fixture
def rng():
    """고정 시드 난수 계약"""
    return RngContract(42)


def test_rng_golden_outputs():
    """시드 0 스트림 0 골든 출력"""
    outputs = RngContract(0).outputs(0, 3)
    assert [int(value) for value in outputs] == SPLITMIX_SEED0
    np.testing.assert_array_equal(RngContract(0).orientations(0, 3), [1, -1, -1])


def test_rng_is_counter_based():
    """구간 생성 결과는 전체 생성의 부분"""
    contract = RngContract(123, stream_id=2)
    whole = contract.outputs(0, 100)
    np.testing.assert_array_equal(contract.outputs(40, 60), whole[40:60])
    shifted = RngContract(123, stream_id=2, counter=40)
    np.testing.assert_array_equal(shifted.outputs(0, 20), whole[40:60])


def test_rng_streams_differ():
    """스트림별로 다른 수열"""
    base = RngContract(5)
    assert not np.array_equal(base.outputs(0, 8), base.with_stream(1).outputs(0, 8))


def test_rng_validation():
    """시드/스트림 범위"""
    with pytest.raises(ValueError):
        RngContract(-1)
    with pytest.raises(ValueError):
        RngContract(0, stream_id=2 ** 32)
    with pytest.raises(ValueError):
        RngContract(0).indices(0, 4, 0)
    with pytest.raises(ValueError):
        sample_orientations(0, RngContract(0))


def test_mix64_is_vectorized():
    """배열 단위 믹서"""
    states = np.array([0x9E3779B97F4A7C15], dtype=np.uint64)
    assert int(mix64(states)[0]) == SPLITMIX_SEED0[0]


def test_orientations_independent_of_workers(rng):
    """작업자 수와 무관한 λ 표본"""
    single = sample_orientations(10_000, rng, workers=1)
    parallel = sample_orientations(10_000, rng, workers=4)
    np.testing.assert_array_equal(single, parallel)


def test_orientation_balance():
    """λ 평균은 5/√n 이내"""
    n = 100_000
    lam = sample_orientations(n, RngContract(2024))
    assert abs(int(lam.sum())) <= 5 * math.sqrt(n)


def test_indices_and_offsets():
    """설정 인덱스와 지터 범위"""
    contract = RngContract(9, stream_id=1)
    indices = contract.indices(0, 10_000, 3)
    assert set(np.unique(indices)) == {0, 1, 2}
    offsets = contract.offsets(0, 10_000, 5)
    assert offsets.min() >= -5 and offsets.max() <= 5
    np.testing.assert_array_equal(contract.offsets(0, 10, 0), np.zeros(10))


def test_mean_and_std_against_two_pass():
    """혼합 쿼터니언 표본 평균/표준편차"""
    generator = np.random.default_rng(1)
    samples = np.zeros((500, 8))
    samples[:, 0] = generator.normal(size=500)
    samples[:, 4:7] = generator.normal(size=(500, 3))
    mean = samples.mean(axis=0)
    expected_std = math.sqrt(np.mean(np.sum((samples - mean) ** 2, axis=1)))
    assert mean_mv(samples).is_close(Multivector(mean))
    assert std_mv(samples) == pytest.approx(expected_std, rel=1e-12)


def test_statistics_reject_empty():
    """빈 표본"""
    with pytest.raises(ValueError):
        mean_mv([])
    with pytest.raises(ValueError):
        std_mv(np.zeros((0, 8)))


def test_zscore_left_division():
    """표준점수 inverse(σ)(x - m)"""
    sigma = Bivector(0.0, 0.0, 1.0)
    score = zscore(ONE, Multivector.zero(), sigma)
    assert score.is_close(-E12)
    with pytest.raises(ValueError):
        zscore(ONE, Multivector.zero(), Multivector.zero())


def test_weighted_moments_match_expanded_sample():
    """개수 가중 통계 = 펼친 표본 통계"""
    values = np.zeros((2, 8))
    values[0, 0], values[1, 0] = 1.0, -1.0
    mean, spread = weighted_moments(values, np.array([3, 1]))
    assert mean[0] == pytest.approx(0.5)
    assert spread == pytest.approx(np.std([1, 1, 1, -1]))


def test_count_orientations():
    """λ 개수"""
    assert count_orientations(np.array([1, -1, 1], dtype=np.int8)) == {1: 2, -1: 1}
    with pytest.raises(ValueError):
        count_orientations(np.array([1, 0]))


@pytest.mark.parametrize("alpha_deg", [0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70, 75, 80, 85, 90])
def test_standard_scalar_exact_for_any_n(alpha_deg):
    """표준점수 상관 스칼라 = -cos2(α-β) (모든 n)"""
    alpha, beta = math.radians(alpha_deg), math.radians(30.0)
    for n in (1, 7, 1000):
        estimate = correlate_standard(alpha, beta, n, RngContract(alpha_deg))
        assert estimate.scalar_part == pytest.approx(-math.cos(2.0 * (alpha - beta)), abs=1e-12)
        bound = abs(math.sin(2.0 * (alpha - beta)))
        assert estimate.residual_norm <= bound + 1e-12


def test_standard_residual_shrinks():
    """쌍벡터 잔차 ≤ 5|sin2Δ|/√n (100 시드 중 95 이상)"""
    alpha, beta = 0.0, math.radians(22.5)
    n = 10_000
    bound = 5.0 * abs(math.sin(2.0 * (alpha - beta))) / math.sqrt(n)
    passed = sum(
        correlate_standard(alpha, beta, n, RngContract(seed)).residual_norm <= bound for seed in range(100)
    )
    assert passed >= 95


def test_standard_example_value():
    """(0°, 22.5°) 표준점수 상관 -0.7071067811865475"""
    estimate = correlate_standard(0.0, math.radians(22.5), 1000, RngContract(42))
    assert estimate.scalar_part == pytest.approx(-0.7071067811865475, abs=1e-12)
    assert estimate.n == 1000
    assert estimate.to_dict()["qm_prediction"] == pytest.approx(-0.7071067811865476)


def test_estimates_thread_invariant(rng):
    """작업자 수와 무관한 추정값 (비트 단위)"""
    alpha, beta = 0.2, 1.3
    one = estimate_all(alpha, beta, 20_000, rng, workers=1)
    many = estimate_all(alpha, beta, 20_000, rng, workers=3)
    for left, right in zip(one, many):
        assert left == right


def test_estimates_from_shared_counts(rng):
    """한 번 집계한 λ 개수로 계산한 추정값 = estimate_all"""
    alpha, beta = 0.0, math.radians(67.5)
    counts = sampled_counts(alpha, beta, 5000, rng)
    assert estimates_from_counts(alpha, beta, counts) == estimate_all(alpha, beta, 5000, rng)
    with pytest.raises(ValueError):
        estimates_from_counts(alpha, beta, counts, ["bogus"])


def test_single_sided_expectation():
    """단일 관측소 기대값 |ℰ| ≤ 5/√n"""
    n = 1_000_000
    for degree in (0, 22.5, 45, 67.5, 90, 112.5, 135, 157.5):
        value = expectation_single(math.radians(degree), n, RngContract(77), station="A", workers=2)
        assert abs(value) <= 5.0 / math.sqrt(n)
    with pytest.raises(ValueError):
        expectation_single(0.0, 10, RngContract(1), station="C")


def test_raw_normalized_sign():
    """원점수 정규화 (0°, 22.5°): 쌍벡터 +sin45 e12"""
    alpha, beta = 0.0, math.radians(22.5)
    estimate = raw_normalized_from_counts(alpha, beta, {1: 500, -1: 500})
    assert estimate.scalar_part == pytest.approx(-math.sqrt(0.5), abs=1e-12)
    assert estimate.bivector_residual.xy == pytest.approx(math.sqrt(0.5), abs=1e-12)
    sampled = correlate_raw_normalized(alpha, beta, 1000, RngContract(3))
    assert sampled.n == 1000


def test_raw_normalized_at_equal_angles():
    """α = β 이면 -1 + m̄²"""
    estimate = raw_normalized_from_counts(0.3, 0.3, {1: 3, -1: 1})
    assert estimate.scalar_part == pytest.approx(-1.0 + 0.25, abs=1e-12)


def test_coincidence_equals_raw_product_mean(rng):
    """동시 계수 상관 = 원점수 곱 평균 = -1"""
    alpha, beta = 0.0, math.radians(67.5)
    counts = sampled_counts(alpha, beta, 5000, rng)
    estimate = correlate_coincidence(alpha, beta, 5000, rng)
    assert estimate.scalar_part == -1.0
    assert raw_product_mean(alpha, beta, counts) == pytest.approx(-1.0, abs=1e-15)
    records = simulate_records(alpha, beta, 200, rng, ValidationPolicy.debug())
    assert coincidence_correlate(records) == -1.0


def test_coincidence_counts_and_errors():
    """동시 계수 표"""
    counts = coincidence_counts(np.array([1, 1, -1, -1]), np.array([1, -1, 1, -1]))
    assert counts == {"++": 1, "--": 1, "+-": 1, "-+": 1}
    assert coincidence_value(counts) == 0.0
    with pytest.raises(ValueError):
        coincidence_correlate([])
    with pytest.raises(ValueError):
        coincidence_counts(np.array([1]), np.array([1, -1]))


def test_estimate_all_rejects_unknown(rng):
    """알 수 없는 추정기"""
    with pytest.raises(ValueError):
        estimate_all(0.0, 0.1, 10, rng, estimators=["bogus"])
    with pytest.raises(ValueError):
        correlate_standard(0.0, 0.1, 0, rng)


def test_standard_residual_vanishes_for_balanced_counts():
    """균형 λ 에서 쌍벡터 잔차 0"""
    estimate = standard_from_counts(0.0, 0.5, {1: 10, -1: 10})
    assert estimate.residual_norm == pytest.approx(0.0, abs=1e-15)


def test_monolithic_records():
    """모놀리식 모드 시행 기록"""
    records = simulate_setting_records([0.0, 45.0], [22.5, 67.5], 1000, 42)
    assert len(records) == 1000
    assert {round(math.degrees(r.alpha), 9) for r in records} == {0.0, 45.0}
    assert all(r.raw_a == r.orientation and r.raw_b == -r.orientation for r in records)
    with pytest.raises(ValueError):
        simulate_setting_records([], [22.5], 10, 42)
