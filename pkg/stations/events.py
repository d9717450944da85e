"""관측소 사건과 NDJSON 사건 기록"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, List, Literal, Optional
import json
from pydantic import BaseModel, ConfigDict, Field
from utils.logger import get_logger

logger = get_logger(__name__)

WIRE_KEYS = ("run", "trial", "station", "setting", "angle_deg", "outcome", "t_ns")


class Station(str, Enum):
    """관측소 구분"""
    A = "A"
    B = "B"


class MatchMode(str, Enum):
    """동시 사건 매칭 방식"""
    BY_TRIAL_ID = "by_trial_id"
    BY_TIME_WINDOW = "by_time_window"


class StationEventRecord(BaseModel):
    """와이어 레코드 스키마 (키 집합이 정확히 일치해야 함)"""
    model_config = ConfigDict(extra="forbid", strict=True)

    run: str = Field(min_length=1)
    trial: int = Field(ge=0)
    station: Literal["A", "B"]
    setting: int = Field(ge=0)
    angle_deg: float
    outcome: Literal[-1, 1]
    t_ns: int


@dataclass(frozen=True)
class StationEvent:
    """관측소 사건 (한 줄 = 한 사건)"""
    run_id: str
    trial: int
    station: Station
    setting_index: int
    angle_deg: float
    outcome: int
    t_ns: int

    def __post_init__(self):
        if self.outcome not in (1, -1):
            raise ValueError(f"결과는 ±1 이어야 합니다: {self.outcome}")
        if self.setting_index < 0:
            raise ValueError(f"설정 인덱스는 0 이상이어야 합니다: {self.setting_index}")
        if self.trial < 0:
            raise ValueError(f"시행 번호는 0 이상이어야 합니다: {self.trial}")

    def to_json_line(self) -> str:
        """NDJSON 한 줄 (개행 미포함, 키 순서 고정)"""
        payload = {
            "run": self.run_id,
            "trial": self.trial,
            "station": self.station.value,
            "setting": self.setting_index,
            "angle_deg": float(self.angle_deg),
            "outcome": int(self.outcome),
            "t_ns": self.t_ns,
        }
        return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "StationEvent":
        """
        NDJSON 한 줄 파싱

        Raises:
            ValueError: JSON 형식 또는 스키마 검증 실패
        """
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise ValueError(f"사건 레코드 JSON 파싱 실패: {e}")
        if isinstance(data, dict) and isinstance(data.get("angle_deg"), int):
            data["angle_deg"] = float(data["angle_deg"])
        record = StationEventRecord.model_validate(data)
        return cls(
            run_id=record.run,
            trial=record.trial,
            station=Station(record.station),
            setting_index=record.setting,
            angle_deg=record.angle_deg,
            outcome=record.outcome,
            t_ns=record.t_ns,
        )


class EventLog:
    """한 관측소의 사건 기록"""

    def __init__(self, station: Station, events: Optional[Iterable[StationEvent]] = None):
        """
        사건 기록 초기화

        Args:
            station: 관측소
            events: 초기 사건 목록
        """
        self.station = Station(station)
        self.events: List[StationEvent] = []
        for event in events or []:
            self.append(event)

    def append(self, event: StationEvent) -> None:
        """
        사건 추가

        Raises:
            ValueError: 다른 관측소의 사건일 때
        """
        if event.station != self.station:
            raise ValueError(f"관측소 {self.station.value} 기록에 {event.station.value} 사건을 추가할 수 없습니다")
        self.events.append(event)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[StationEvent]:
        return iter(self.events)

    @property
    def run_ids(self) -> List[str]:
        return sorted({event.run_id for event in self.events})

    def to_ndjson(self) -> str:
        """전체 기록 NDJSON 문자열 (줄마다 개행)"""
        return "".join(event.to_json_line() + "\n" for event in self.events)

    def to_bytes(self) -> bytes:
        return self.to_ndjson().encode("utf-8")

    @classmethod
    def from_lines(cls, lines: Iterable[str], station: Optional[Station] = None) -> "EventLog":
        """
        NDJSON 줄 목록에서 기록 생성

        Args:
            lines: NDJSON 줄
            station: 기대 관측소 (None 이면 첫 사건으로 결정)

        Raises:
            ValueError: 빈 기록이거나 관측소가 섞였을 때
        """
        events = [StationEvent.from_json_line(line) for line in lines if line.strip()]
        if station is None:
            if not events:
                raise ValueError("빈 사건 기록의 관측소를 결정할 수 없습니다")
            station = events[0].station
        return cls(station, events)


def write_event_log(log: EventLog, file_path: str) -> Path:
    """
    사건 기록을 NDJSON 파일로 저장

    Args:
        log: 사건 기록
        file_path: 저장 경로

    Returns:
        저장된 파일 경로
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(log.to_ndjson())
    logger.info(f"관측소 {log.station.value} 사건 기록 저장: {path} ({len(log)}건)")
    return path


def read_event_log(file_path: str) -> EventLog:
    """
    NDJSON 파일에서 사건 기록 로드

    Raises:
        FileNotFoundError: 파일이 없을 때
        ValueError: 레코드 검증 실패
    """
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"파일을 찾을 수 없습니다: {file_path}")
    with open(path, "r", encoding="utf-8") as f:
        log = EventLog.from_lines(f)
    logger.info(f"관측소 {log.station.value} 사건 기록 로드: {path} ({len(log)}건)")
    return log
