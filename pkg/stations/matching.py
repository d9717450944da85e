"""동시 사건 매칭과 설정 쌍별 추정"""

from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple
import math
import numpy as np
import pandas as pd
from analytics.correlation import coincidence_correlate, count_orientations, standard_from_counts
from model.scores import TrialOutcome, qm_prediction
from stations.events import EventLog, MatchMode, Station, StationEvent
from utils.logger import get_logger

logger = get_logger(__name__)

PAIR_COLUMNS = [
    "alpha_deg",
    "beta_deg",
    "n",
    "coincidence",
    "standard_scalar",
    "standard_residual_norm",
    "qm_prediction",
]


@dataclass(frozen=True)
class MatchPolicy:
    """매칭 정책 (시간 창과 지터는 ns 단위)"""
    mode: MatchMode = MatchMode.BY_TRIAL_ID
    window_ns: int = 1000
    jitter_ns: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", MatchMode(self.mode))
        if self.mode == MatchMode.BY_TIME_WINDOW and self.window_ns <= 0:
            raise ValueError(f"시간 창 매칭에는 양수 window_ns 가 필요합니다: {self.window_ns}")
        if self.jitter_ns < 0:
            raise ValueError(f"jitter_ns 는 0 이상이어야 합니다: {self.jitter_ns}")


@dataclass
class MatchReport:
    """매칭 결과"""
    mode: MatchMode
    run_id: str
    records: List[TrialOutcome] = field(default_factory=list)
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    unmatched_a: int = 0
    unmatched_b: int = 0

    @property
    def matched(self) -> int:
        return len(self.records)

    @property
    def matched_fraction(self) -> float:
        """매칭률 (큰 쪽 기록 기준)"""
        total = max(self.matched + self.unmatched_a, self.matched + self.unmatched_b)
        return self.matched / total if total > 0 else 0.0

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TrialOutcome]:
        return iter(self.records)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "run": self.run_id,
            "matched": self.matched,
            "unmatched_a": self.unmatched_a,
            "unmatched_b": self.unmatched_b,
            "matched_fraction": self.matched_fraction,
        }


def _run_id(log: EventLog) -> str:
    """
    기록의 실행 ID 와 시행 번호 중복 확인

    Raises:
        ValueError: 빈 기록, 실행 ID 혼재, 시행 번호 중복
    """
    if len(log) == 0:
        raise ValueError(f"관측소 {log.station.value} 기록이 비어 있습니다")
    run_ids = log.run_ids
    if len(run_ids) != 1:
        raise ValueError(f"관측소 {log.station.value} 기록에 실행 ID 가 섞여 있습니다: {run_ids}")
    trials = [event.trial for event in log]
    if len(set(trials)) != len(trials):
        raise ValueError(f"관측소 {log.station.value} 기록에 중복 시행 번호가 있습니다")
    return run_ids[0]


def _ordered(log_a: EventLog, log_b: EventLog) -> Tuple[EventLog, EventLog]:
    if log_a.station == log_b.station:
        raise ValueError(f"두 기록이 모두 관측소 {log_a.station.value} 의 것입니다")
    if log_a.station == Station.B:
        return log_b, log_a
    return log_a, log_b


def _record(event_a: StationEvent, event_b: StationEvent) -> TrialOutcome:
    # 𝒜 = λ 이므로 λ 는 A 결과에서 복원된다
    return TrialOutcome(
        orientation=event_a.outcome,
        alpha=math.radians(event_a.angle_deg),
        beta=math.radians(event_b.angle_deg),
        raw_a=event_a.outcome,
        raw_b=event_b.outcome,
        trial=event_a.trial,
    )


def _match_by_trial(events_a: List[StationEvent], events_b: List[StationEvent]) -> List[Tuple[StationEvent, StationEvent]]:
    by_trial = {event.trial: event for event in events_b}
    pairs = [(event, by_trial[event.trial]) for event in events_a if event.trial in by_trial]
    pairs.sort(key=lambda pair: pair[0].trial)
    return pairs


def _match_by_window(
    events_a: List[StationEvent],
    events_b: List[StationEvent],
    window_ns: int,
) -> List[Tuple[StationEvent, StationEvent]]:
    """시간순 두 포인터 탐욕 매칭 (한 사건은 최대 한 번 매칭)"""
    sorted_a = sorted(events_a, key=lambda event: (event.t_ns, event.trial))
    sorted_b = sorted(events_b, key=lambda event: (event.t_ns, event.trial))
    pairs = []
    i = j = 0
    while i < len(sorted_a) and j < len(sorted_b):
        t_a, t_b = sorted_a[i].t_ns, sorted_b[j].t_ns
        if abs(t_a - t_b) <= window_ns:
            pairs.append((sorted_a[i], sorted_b[j]))
            i += 1
            j += 1
        elif t_a < t_b:
            i += 1
        else:
            j += 1
    return pairs


def match_coincidences(log_a: EventLog, log_b: EventLog, policy: MatchPolicy = MatchPolicy()) -> MatchReport:
    """
    두 관측소 기록을 사후 매칭

    Args:
        log_a: 관측소 기록 (A 또는 B, 순서 무관)
        log_b: 다른 관측소 기록
        policy: 매칭 정책

    Returns:
        매칭 결과 (records 는 TrialOutcome 목록)

    Raises:
        ValueError: 실행 ID 불일치, 중복 시행 번호, 빈 기록
    """
    log_a, log_b = _ordered(log_a, log_b)
    run_a, run_b = _run_id(log_a), _run_id(log_b)
    if run_a != run_b:
        raise ValueError(f"실행 ID 불일치: {run_a} != {run_b}")

    if policy.mode == MatchMode.BY_TRIAL_ID:
        pairs = _match_by_trial(log_a.events, log_b.events)
    else:
        pairs = _match_by_window(log_a.events, log_b.events, policy.window_ns)

    report = MatchReport(
        mode=policy.mode,
        run_id=run_a,
        records=[_record(a, b) for a, b in pairs],
        pairs=[(a.trial, b.trial) for a, b in pairs],
        unmatched_a=len(log_a) - len(pairs),
        unmatched_b=len(log_b) - len(pairs),
    )

    if report.unmatched_a or report.unmatched_b:
        logger.warning(
            f"미매칭 사건: A={report.unmatched_a}, B={report.unmatched_b} "
            f"(매칭률 {report.matched_fraction:.4f})"
        )
    logger.info(f"동시 사건 매칭 완료: {policy.mode.value}, {report.matched}쌍")
    return report


def pair_estimates(records: Sequence[TrialOutcome]) -> pd.DataFrame:
    """
    설정 쌍별 동시 계수 상관과 표준점수 상관

    Args:
        records: 매칭된 시행 결과

    Returns:
        (alpha_deg, beta_deg) 정렬 데이터프레임

    Raises:
        ValueError: 빈 기록
    """
    if len(records) == 0:
        raise ValueError("빈 기록으로는 설정 쌍별 추정을 할 수 없습니다")

    frame = pd.DataFrame(
        {
            "alpha": [record.alpha for record in records],
            "beta": [record.beta for record in records],
            "position": np.arange(len(records)),
        }
    )
    rows = []
    for (alpha, beta), group in frame.groupby(["alpha", "beta"], sort=True):
        subset = [records[k] for k in group["position"]]
        counts = count_orientations(np.array([record.orientation for record in subset], dtype=np.int8))
        standard = standard_from_counts(alpha, beta, counts)
        rows.append(
            {
                "alpha_deg": math.degrees(alpha),
                "beta_deg": math.degrees(beta),
                "n": len(subset),
                "coincidence": coincidence_correlate(subset),
                "standard_scalar": standard.scalar_part,
                "standard_residual_norm": standard.residual_norm,
                "qm_prediction": qm_prediction(alpha, beta),
            }
        )
    return pd.DataFrame(rows, columns=PAIR_COLUMNS)
