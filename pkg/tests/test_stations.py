"""두 관측소 프로토콜 테스트"""

import json
import math
import threading
import pytest
import numpy as np
import pandas as pd
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from analytics.correlation import simulate_setting_records
from stations.events import EventLog, MatchMode, Station, StationEvent, read_event_log, write_event_log
from stations.matching import PAIR_COLUMNS, MatchPolicy, match_coincidences, pair_estimates
from stations.station import StationTiming, run_station, run_stations, source_orientations
from stations.wire import StationLogServer, fetch_station_log
from utils.validators import ExperimentConfig

TRIALS = 4000


@pytest.fixture
def config():
    """기본 두 관측소 실험 설정"""
    return ExperimentConfig(
        angles_a_deg=[0.0, 45.0],
        angles_b_deg=[22.5, 67.5],
        trials=TRIALS,
        master_seed=42,
        run_id="run-test",
    )


@pytest.fixture
def logs(config):
    """A/B 사건 기록"""
    return run_stations(config)


def _event(trial, station="A", run_id="r", t_ns=0, outcome=1):
    return StationEvent(run_id, trial, Station(station), 0, 0.0, outcome, t_ns)


def test_each_station_logs_every_trial(logs):
    """관측소마다 시행 수만큼 사건"""
    log_a, log_b = logs
    assert len(log_a) == len(log_b) == TRIALS
    assert log_a.station == Station.A and log_b.station == Station.B
    assert [event.trial for event in log_a] == list(range(TRIALS))
    assert log_a.run_ids == ["run-test"]


def test_outcomes_follow_source_orientation(config, logs):
    """A 결과 = λ, B 결과 = -λ"""
    log_a, log_b = logs
    lam = source_orientations(config.master_seed, config.trials)
    np.testing.assert_array_equal([event.outcome for event in log_a], lam)
    np.testing.assert_array_equal([event.outcome for event in log_b], -lam)
    with pytest.raises(ValueError):
        lam[0] = 1


def test_setting_switches_are_balanced(config):
    """설정 선택 히스토그램: 각 설정이 n/2 ± 5√n 이내"""
    n = 100_000
    log_a, log_b = run_stations(config.model_copy(update={"trials": n}), workers=2)
    for log in (log_a, log_b):
        histogram = np.bincount([event.setting_index for event in log], minlength=2)
        assert len(histogram) == 2
        assert np.all(np.abs(histogram - n / 2) <= 5.0 * math.sqrt(n))


def test_stations_reproduce_monolithic_run(config, logs):
    """관측소 모드 설정 쌍별 추정 = 모놀리식 모드 (비트 단위)"""
    report = match_coincidences(*logs)
    distributed = pair_estimates(report.records)
    monolithic = pair_estimates(
        simulate_setting_records(config.angles_a_deg, config.angles_b_deg, config.trials, config.master_seed)
    )
    assert list(distributed.columns) == PAIR_COLUMNS
    assert len(distributed) == 4
    pd.testing.assert_frame_equal(distributed, monolithic, check_exact=True)
    assert (distributed["coincidence"] == -1.0).all()


def test_sequential_and_threaded_runs_match(config):
    """순차 실행과 스레드 실행 결과 동일"""
    seq_a, seq_b = run_stations(config, workers=1)
    par_a, par_b = run_stations(config, workers=2)
    assert seq_a.to_ndjson() == par_a.to_ndjson()
    assert seq_b.to_ndjson() == par_b.to_ndjson()


def test_station_isolation(config):
    """B 각도 목록을 바꿔도 A 기록 바이트는 불변"""
    permuted = config.model_copy(update={"angles_b_deg": [67.5, 22.5]})
    log_a, log_b = run_stations(config)
    other_a, other_b = run_stations(permuted)
    assert log_a.to_bytes() == other_a.to_bytes()
    assert log_b.to_bytes() != other_b.to_bytes()
    lam = source_orientations(config.master_seed, 10)
    with pytest.raises(ValueError):
        run_station(Station.A, "run", [], lam, config.master_seed)
    with pytest.raises(ValueError):
        run_station(Station.B, "run", [0.0, math.nan], lam, config.master_seed)


def test_zero_jitter_window_matches_trial_ids(logs):
    """지터 0 이면 시간 창 매칭 = 시행 번호 매칭"""
    by_trial = match_coincidences(*logs)
    by_window = match_coincidences(*logs, MatchPolicy(MatchMode.BY_TIME_WINDOW, window_ns=1000))
    assert by_window.pairs == by_trial.pairs
    assert by_window.records == by_trial.records
    assert by_trial.matched_fraction == 1.0


def test_large_jitter_loses_matches(config):
    """지터가 창의 두 배면 일부 사건 미매칭"""
    policy = MatchPolicy(MatchMode.BY_TIME_WINDOW, window_ns=1000, jitter_ns=2000)
    log_a, log_b = run_stations(config, policy, StationTiming(period_ns=10_000, base_ns=5000))
    report = match_coincidences(log_a, log_b, policy)
    assert report.matched_fraction < 1.0
    assert report.unmatched_a == report.unmatched_b > 0
    for trial_a, trial_b in report.pairs:
        assert trial_a == trial_b


def test_matching_is_symmetric(config):
    """매칭 결과는 인자 순서와 무관"""
    policy = MatchPolicy(MatchMode.BY_TIME_WINDOW, window_ns=1000, jitter_ns=800)
    log_a, log_b = run_stations(config, policy)
    forward = match_coincidences(log_a, log_b, policy)
    backward = match_coincidences(log_b, log_a, policy)
    assert forward.pairs == backward.pairs
    assert forward.to_dict() == backward.to_dict()


def test_window_matching_is_one_to_one():
    """한 사건은 최대 한 번 매칭"""
    log_a = EventLog(Station.A, [_event(0, t_ns=100), _event(1, t_ns=105)])
    log_b = EventLog(Station.B, [_event(0, "B", t_ns=102, outcome=-1)])
    report = match_coincidences(log_a, log_b, MatchPolicy(MatchMode.BY_TIME_WINDOW, window_ns=10))
    assert report.pairs == [(0, 0)]
    assert report.unmatched_a == 1
    assert report.matched_fraction == pytest.approx(0.5)


def test_matching_errors():
    """실행 ID 불일치, 중복 시행, 같은 관측소"""
    log_a = EventLog(Station.A, [_event(0)])
    with pytest.raises(ValueError):
        match_coincidences(log_a, EventLog(Station.B, [_event(0, "B", run_id="other")]))
    with pytest.raises(ValueError):
        match_coincidences(EventLog(Station.A, [_event(0), _event(0)]), EventLog(Station.B, [_event(0, "B")]))
    with pytest.raises(ValueError):
        match_coincidences(log_a, EventLog(Station.A, [_event(0)]))
    with pytest.raises(ValueError):
        match_coincidences(log_a, EventLog(Station.B))
    with pytest.raises(ValueError):
        MatchPolicy(MatchMode.BY_TIME_WINDOW, window_ns=0)
    with pytest.raises(ValueError):
        pair_estimates([])


def test_event_log_rejects_foreign_station():
    """다른 관측소 사건 추가"""
    with pytest.raises(ValueError):
        EventLog(Station.A).append(_event(0, "B"))
    with pytest.raises(ValueError):
        _event(0, outcome=0)


def test_ndjson_round_trip(logs, tmp_path):
    """NDJSON 저장/로드"""
    log_a, _ = logs
    path = write_event_log(log_a, str(tmp_path / "station_A.ndjson"))
    loaded = read_event_log(str(path))
    assert loaded.station == Station.A
    assert loaded.events == log_a.events
    first = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert list(first) == ["run", "trial", "station", "setting", "angle_deg", "outcome", "t_ns"]


def test_malformed_lines_rejected():
    """깨진 JSON, 추가 키, 누락 키"""
    good = _event(3).to_json_line()
    assert StationEvent.from_json_line(good) == _event(3)
    with pytest.raises(ValueError):
        StationEvent.from_json_line("{not json")
    payload = json.loads(good)
    with pytest.raises(ValueError):
        StationEvent.from_json_line(json.dumps({**payload, "extra": 1}))
    del payload["t_ns"]
    with pytest.raises(ValueError):
        StationEvent.from_json_line(json.dumps(payload))
    with pytest.raises(FileNotFoundError):
        read_event_log("/nonexistent/station.ndjson")


def test_tcp_loopback(logs):
    """TCP 로 B 기록 송수신"""
    _, log_b = logs
    with StationLogServer(log_b) as server:
        host, port = server.address
        sent = {}
        thread = threading.Thread(target=lambda: sent.setdefault("bytes", server.serve_once()))
        thread.start()
        received = fetch_station_log(host, port, timeout_s=10.0, station=Station.B)
        thread.join(timeout=10.0)
    assert sent["bytes"] == len(log_b.to_bytes())
    assert received.events == log_b.events
