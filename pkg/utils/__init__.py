"""유틸리티 모듈"""

from utils.logger import setup_logger, get_logger
from utils.helpers import load_yaml, parse_float_list, to_json, write_output
from utils.parallel import map_partitions, partition, resolve_worker_count
from utils.validators import ExperimentConfig, Settings, load_settings

__version__ = "1.0.0"

__all__ = [
    "setup_logger",
    "get_logger",
    "load_yaml",
    "parse_float_list",
    "to_json",
    "write_output",
    "map_partitions",
    "partition",
    "resolve_worker_count",
    "ExperimentConfig",
    "Settings",
    "load_settings",
]
