"""각도 사중쌍 최적화 모듈"""

from optimization.grid_search import AngleGridSearch, ScanResult, scan_max

__all__ = [
    "AngleGridSearch",
    "ScanResult",
    "scan_max",
]
