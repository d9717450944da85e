"""관측소 실행: 공유 λ 원천, 독립 설정 스위치, 관측소별 사건 기록"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple
import numpy as np
from analytics.rng import (
    JITTER_A_STREAM,
    JITTER_B_STREAM,
    RngContract,
    SOURCE_STREAM,
    STATION_A_STREAM,
    STATION_B_STREAM,
)
from model.orientation import Orientation, PolarizerSetting
from model.scores import raw_score_A, raw_score_B
from stations.events import EventLog, Station, StationEvent
from stations.matching import MatchPolicy
from utils.logger import get_logger
from utils.validators import ExperimentConfig

logger = get_logger(__name__)

SETTING_STREAMS = {Station.A: STATION_A_STREAM, Station.B: STATION_B_STREAM}
JITTER_STREAMS = {Station.A: JITTER_A_STREAM, Station.B: JITTER_B_STREAM}


@dataclass(frozen=True)
class StationTiming:
    """모의 타임스탬프 t = base + trial·period + jitter (ns)"""
    period_ns: int = 10_000
    base_ns: int = 0

    def __post_init__(self):
        if self.period_ns < 1:
            raise ValueError(f"period_ns 는 1 이상이어야 합니다: {self.period_ns}")
        if self.base_ns < 0:
            raise ValueError(f"base_ns 는 0 이상이어야 합니다: {self.base_ns}")


def source_orientations(master_seed: int, trials: int) -> np.ndarray:
    """
    원천 λ 수열 (스트림 0)

    Raises:
        ValueError: trials < 1
    """
    if trials < 1:
        raise ValueError(f"시행 수는 1 이상이어야 합니다: {trials}")
    lam = RngContract(master_seed, SOURCE_STREAM).orientations(0, trials)
    lam.setflags(write=False)
    return lam


def _outcome_table(station: Station, radians: Sequence[float]) -> Dict[Tuple[int, int], int]:
    score = raw_score_A if station == Station.A else raw_score_B
    return {(k, lam): score(angle, lam) for k, angle in enumerate(radians) for lam in map(int, Orientation)}


def run_station(
    station: Station,
    run_id: str,
    angles_deg: Sequence[float],
    orientations: np.ndarray,
    master_seed: int,
    jitter_ns: int = 0,
    timing: StationTiming = StationTiming(),
) -> EventLog:
    """
    한 관측소 실행

    관측소는 자신의 각도 목록, 자신의 설정/지터 스트림, 읽기 전용 λ 수열만 받는다.

    Args:
        station: 관측소
        run_id: 실행 ID
        angles_deg: 설정 각도 목록 (도)
        orientations: 원천 λ 수열
        master_seed: 마스터 시드
        jitter_ns: 사건별 지터 폭 (ns)
        timing: 타임스탬프 설정

    Returns:
        사건 기록 (시행 순)

    Raises:
        ValueError: 빈 각도 목록 또는 유한하지 않은 각도
    """
    station = Station(station)
    if len(angles_deg) == 0:
        raise ValueError(f"관측소 {station.value} 각도 목록이 비어 있습니다")

    trials = len(orientations)
    polarizers = [PolarizerSetting.from_degrees(angle) for angle in angles_deg]
    table = _outcome_table(station, [polarizer.angle for polarizer in polarizers])

    seed = RngContract(master_seed)
    settings = seed.with_stream(SETTING_STREAMS[station]).indices(0, trials, len(polarizers))
    jitter = seed.with_stream(JITTER_STREAMS[station]).offsets(0, trials, jitter_ns)

    log = EventLog(station)
    for trial in range(trials):
        index = int(settings[trial])
        log.append(
            StationEvent(
                run_id=run_id,
                trial=trial,
                station=station,
                setting_index=index,
                angle_deg=float(angles_deg[index]),
                outcome=table[(index, int(orientations[trial]))],
                t_ns=timing.base_ns + trial * timing.period_ns + int(jitter[trial]),
            )
        )

    logger.info(f"관측소 {station.value} 실행 완료: {trials}건, 각도 {len(polarizers)}개")
    return log


def run_stations(
    config: ExperimentConfig,
    policy: MatchPolicy = MatchPolicy(),
    timing: StationTiming = StationTiming(),
    workers: int = 2,
) -> Tuple[EventLog, EventLog]:
    """
    두 관측소 동시 실행 (프로세스 내 모드)

    Args:
        config: 실험 설정 (angles_a_deg, angles_b_deg, trials, master_seed, run_id)
        policy: 매칭 정책 (jitter_ns 사용)
        timing: 타임스탬프 설정
        workers: 1 이면 순차, 2 이상이면 관측소마다 작업자 하나

    Returns:
        (A 기록, B 기록)

    Raises:
        ValueError: 빈 각도 목록 또는 trials < 1
    """
    if not config.angles_a_deg or not config.angles_b_deg:
        raise ValueError("각 관측소에 각도가 하나 이상 필요합니다")

    lam = source_orientations(config.master_seed, config.trials)
    jobs = [
        (Station.A, config.angles_a_deg),
        (Station.B, config.angles_b_deg),
    ]

    def work(job: Tuple[Station, Sequence[float]]) -> EventLog:
        station, angles = job
        return run_station(station, config.run_id, angles, lam, config.master_seed, policy.jitter_ns, timing)

    if workers <= 1:
        log_a, log_b = [work(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=2) as executor:
            log_a, log_b = list(executor.map(work, jobs))

    logger.info(f"두 관측소 실행 완료: run={config.run_id}, n={config.trials}")
    return log_a, log_b
