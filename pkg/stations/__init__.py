"""두 관측소 프로토콜 모듈"""

from stations.events import (
    EventLog,
    MatchMode,
    Station,
    StationEvent,
    read_event_log,
    write_event_log,
)
from stations.matching import MatchPolicy, MatchReport, match_coincidences, pair_estimates
from stations.station import StationTiming, run_station, run_stations, source_orientations
from stations.wire import StationLogServer, fetch_station_log, serve_station_log

__all__ = [
    "EventLog",
    "MatchMode",
    "MatchPolicy",
    "MatchReport",
    "Station",
    "StationEvent",
    "StationLogServer",
    "StationTiming",
    "fetch_station_log",
    "match_coincidences",
    "pair_estimates",
    "read_event_log",
    "run_station",
    "run_stations",
    "serve_station_log",
    "source_orientations",
    "write_event_log",
]
