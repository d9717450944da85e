"""설정 검증, 병렬 분할, 헬퍼 테스트"""

import json
import pytest
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from pydantic import ValidationError

from utils.helpers import load_yaml, parse_float_list, to_json, write_output
from utils.parallel import THREADS_ENV, map_partitions, partition, resolve_worker_count
from utils.validators import (
    CurveConfig,
    ExperimentConfig,
    Settings,
    StationsConfig,
    load_settings,
)


def test_experiment_config_defaults():
    """실험 설정 기본값"""
    config = ExperimentConfig()
    assert config.alpha_deg == 0.0
    assert config.beta_deg == 22.5
    assert config.chsh_angles_deg == [0.0, 45.0, 22.5, 67.5]
    assert config.estimator == "standard"


def test_experiment_config_json_round_trip():
    """JSON 직렬화 왕복"""
    config = ExperimentConfig(trials=10, master_seed=2 ** 64 - 1, estimator="all", run_id="r-9")
    restored = ExperimentConfig.model_validate_json(config.model_dump_json())
    assert restored == config


@pytest.mark.parametrize(
    "overrides",
    [
        {"trials": 0},
        {"master_seed": -1},
        {"master_seed": 2 ** 64},
        {"estimator": "bogus"},
        {"chsh_angles_deg": [0.0, 45.0]},
        {"angles_a_deg": []},
        {"alpha_deg": float("nan")},
        {"unknown": 1},
    ],
)
def test_experiment_config_rejects(overrides):
    """잘못된 실험 설정"""
    with pytest.raises(ValidationError):
        ExperimentConfig(**overrides)


def test_curve_and_station_configs():
    """곡선 구간과 관측소 설정 검증"""
    with pytest.raises(ValidationError):
        CurveConfig(beta_start_deg=90.0, beta_end_deg=0.0)
    with pytest.raises(ValidationError):
        StationsConfig(match="nearest")
    with pytest.raises(ValidationError):
        StationsConfig(window_ns=0)
    assert StationsConfig().port == 50555


def test_load_settings_default_file():
    """기본 설정 파일 로드"""
    settings = load_settings()
    assert isinstance(settings, Settings)
    assert settings.experiment.master_seed == 42
    assert settings.scan.trials is None


def test_load_settings_errors(tmp_path):
    """없는 파일과 알 수 없는 섹션"""
    with pytest.raises(FileNotFoundError):
        load_settings(str(tmp_path / "missing.yaml"))
    path = tmp_path / "bad.yaml"
    path.write_text("exchange:\n  name: x\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_settings(str(path))


def test_load_yaml_empty(tmp_path):
    """빈 YAML 은 빈 딕셔너리"""
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_yaml(str(path)) == {}


def test_resolve_worker_count(monkeypatch):
    """HOPFSIM_THREADS 상한"""
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_worker_count(3) == 3
    monkeypatch.setenv(THREADS_ENV, "2")
    assert resolve_worker_count(8) == 2
    assert resolve_worker_count(1) == 1
    monkeypatch.setenv(THREADS_ENV, "zero")
    with pytest.raises(ValueError):
        resolve_worker_count(1)
    monkeypatch.delenv(THREADS_ENV)
    with pytest.raises(ValueError):
        resolve_worker_count(0)


def test_partition_covers_range():
    """연속 구간 분할"""
    assert partition(10, 3) == [(0, 4), (4, 7), (7, 10)]
    assert partition(2, 8) == [(0, 1), (1, 2)]
    assert partition(0, 4) == []


def test_map_partitions_preserves_order():
    """결과는 구간 순서"""
    result = map_partitions(lambda start, stop: list(range(start, stop)), 100, workers=4)
    assert sum(result, []) == list(range(100))


def test_parse_float_list():
    """쉼표 구분 실수 목록"""
    assert parse_float_list("0, 45,22.5,67.5", expected=4) == [0.0, 45.0, 22.5, 67.5]
    with pytest.raises(ValueError):
        parse_float_list("0,x")
    with pytest.raises(ValueError):
        parse_float_list("0,45", expected=4)
    with pytest.raises(ValueError):
        parse_float_list("0,inf")
    with pytest.raises(ValueError):
        parse_float_list("")


def test_to_json_and_write_output(tmp_path, capsys):
    """JSON 직렬화와 출력"""
    text = to_json({"b": 1, "a": [1.5]})
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["b", "a"]
    with pytest.raises(ValueError):
        to_json({"x": float("nan")})

    write_output(text)
    assert capsys.readouterr().out == text
    target = tmp_path / "out" / "result.json"
    write_output(text, str(target))
    assert target.read_text(encoding="utf-8") == text
