"""CHSH 경계와 사중쌍 스캔 테스트"""

import math
import pytest
import numpy as np
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from analytics.chsh import (
    QM_LIMIT,
    AngleQuad,
    analytic_report,
    chsh_bound_cross,
    chsh_bound_sine,
    chsh_string,
    commutator_norms,
    cross_commutator_norm,
    qm_ceiling,
    variance_inequality_report,
    variance_rhs,
)
from algebra.multivector import commutator, inner, mu
from analytics.rng import RngContract
from model.orientation import setting_vector
from model.scores import mu_dot, qm_prediction
from optimization.grid_search import AngleGridSearch, grid_size, scan_max

TSIRELSON_QUAD = [0.0, 45.0, 22.5, 67.5]


@pytest.fixture
def random_quads():
    """무작위 각도 사중쌍"""
    generator = np.random.default_rng(99)
    return [AngleQuad(*row) for row in generator.uniform(0.0, 2.0 * math.pi, size=(500, 4))]


def test_bound_forms_agree(random_quads):
    """사인 경계 = 교차곱 경계, 범위 [0, 2√2]"""
    for q in random_quads:
        sine = chsh_bound_sine(q)
        assert sine == pytest.approx(chsh_bound_cross(q), abs=1e-12)
        assert 0.0 <= sine <= QM_LIMIT + 1e-12


def test_bound_at_standard_quad():
    """(0, 45, 22.5, 67.5) 에서 경계 2√2, S = 0"""
    q = AngleQuad.from_degrees(TSIRELSON_QUAD)
    assert chsh_bound_sine(q) == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)
    assert chsh_string(qm_prediction, q) == pytest.approx(0.0, abs=1e-12)


def test_string_at_optimal_quad():
    """(0, 45, 22.5, 157.5) 에서 |S| = 2√2"""
    q = AngleQuad.from_degrees([0.0, 45.0, 22.5, 157.5])
    assert abs(chsh_string(qm_prediction, q)) == pytest.approx(QM_LIMIT, abs=1e-12)
    assert qm_ceiling() == pytest.approx(2.0 * math.sqrt(2.0))


def test_angle_quad_validation():
    """각도 개수와 유한성"""
    with pytest.raises(ValueError):
        AngleQuad.from_degrees([0.0, 45.0, 22.5])
    with pytest.raises(ValueError):
        AngleQuad(0.0, math.nan, 0.0, 0.0)


def test_commutators():
    """같은 관측소 교환자 노름 2, 관측소 간 교환자는 일반적으로 0 이 아님"""
    q = AngleQuad.from_degrees(TSIRELSON_QUAD)
    left, right = commutator_norms(q)
    assert left == pytest.approx(2.0, abs=1e-12)
    assert right == pytest.approx(2.0, abs=1e-12)
    assert cross_commutator_norm(q) == pytest.approx(2.0 * abs(math.sin(2.0 * (q.alpha - q.beta))), abs=1e-12)
    assert cross_commutator_norm(q) == pytest.approx(math.sqrt(2.0), abs=1e-12)


@pytest.mark.parametrize("lam", [1, -1])
def test_cross_station_commutator_closed_form(lam):
    """[μ·ã, μ·b̃] = -2μ·(ã×b̃)"""
    a, b = setting_vector(0.0), setting_vector(math.radians(22.5))
    value = commutator(mu_dot(0.0, lam), mu_dot(math.radians(22.5), lam), lam)
    expected = inner(mu(lam), a.cross(b), lam) * -2.0
    assert value.is_close(expected)
    assert value.max_abs() == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_variance_rhs_matches_bound(random_quads):
    """분산 부등식 우변 = 2√(1 - (ã×ã′)·(b̃′×b̃))"""
    for q in random_quads[:50]:
        assert variance_rhs(q, {1: 7, -1: 3}) == pytest.approx(chsh_bound_cross(q), abs=1e-9)


def test_report_at_zero_bound_quad():
    """경계 0 사중쌍에서도 두 경계 형태가 일치하고 분산 부등식은 불성립으로 보고"""
    q = AngleQuad.from_degrees([0.0, 45.0, 22.5, 157.5])
    report = analytic_report(q)
    assert report.bound_sine == pytest.approx(0.0, abs=1e-6)
    assert report.bound_cross == pytest.approx(0.0, abs=1e-6)
    assert report.within_variance_bound is False
    assert report.within_qm_ceiling is True


def test_analytic_report():
    """해석적 보고서"""
    report = analytic_report(AngleQuad.from_degrees(TSIRELSON_QUAD))
    payload = report.to_dict()
    assert payload["bound"] == pytest.approx(2.0 * math.sqrt(2.0))
    assert payload["string_value"] == pytest.approx(0.0, abs=1e-12)
    assert payload["within_qm_ceiling"] is True
    assert payload["commutation_holds"] is False
    assert payload["trials"] is None
    assert set(payload["correlations"]) == {"E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"}


def test_sampled_report_uses_exact_scalars():
    """표본 보고서의 상관값은 -cos2Δ 와 일치"""
    q = AngleQuad.from_degrees([0.0, 45.0, 22.5, 157.5])
    report = variance_inequality_report(q, 5000, RngContract(42), workers=2)
    assert abs(report.string_value) == pytest.approx(QM_LIMIT, abs=1e-9)
    assert report.within_qm_ceiling
    assert report.trials == 5000


def test_grid_size():
    """격자 간격 검증"""
    assert grid_size(7.5) == 48
    assert grid_size(22.5) == 16
    with pytest.raises(ValueError):
        grid_size(7.0)
    with pytest.raises(ValueError):
        grid_size(0.0)


def test_scan_finds_tsirelson_quad():
    """7.5° 격자 스캔: 사전순 최소 최적 사중쌍"""
    result = AngleGridSearch({"grid_step_deg": 7.5, "max_workers": 2, "progress": False}).scan(qm_prediction)
    assert result.value == pytest.approx(QM_LIMIT, abs=1e-9)
    assert result.quad.degrees() == pytest.approx((0.0, 45.0, 22.5, 157.5))
    assert result.quads_scanned == 48 ** 4
    payload = result.to_dict()
    assert payload["bound"] == pytest.approx(0.0, abs=1e-6)
    assert analytic_report(result.quad).within_variance_bound is False


def test_scan_independent_of_workers():
    """작업자 수와 무관한 스캔 결과"""
    single = scan_max(22.5, qm_prediction, workers=1)
    parallel = scan_max(22.5, qm_prediction, workers=4)
    assert single[0] == parallel[0]
    assert single[1] == parallel[1]
