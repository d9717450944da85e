"""작업자 수 결정과 구간 분할 병렬 실행"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple, TypeVar
import os
from utils.logger import get_logger

logger = get_logger(__name__)

THREADS_ENV = "HOPFSIM_THREADS"

T = TypeVar("T")


def resolve_worker_count(requested: Optional[int] = None) -> int:
    """
    작업자 수 결정

    요청값(CLI 또는 설정) → CPU 수 순서로 정하고 HOPFSIM_THREADS 가 있으면 상한으로 적용한다.

    Args:
        requested: 요청 작업자 수

    Returns:
        1 이상의 작업자 수

    Raises:
        ValueError: 요청값 또는 환경 변수가 양의 정수가 아닐 때
    """
    if requested is not None and requested < 1:
        raise ValueError(f"작업자 수는 1 이상이어야 합니다: {requested}")

    workers = requested if requested is not None else (os.cpu_count() or 1)

    cap_text = os.environ.get(THREADS_ENV)
    if cap_text is not None and cap_text.strip() != "":
        try:
            cap = int(cap_text)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} 는 양의 정수여야 합니다: {cap_text!r}")
        if cap < 1:
            raise ValueError(f"{THREADS_ENV} 는 양의 정수여야 합니다: {cap_text!r}")
        workers = min(workers, cap)

    return workers


def partition(total: int, parts: int) -> List[Tuple[int, int]]:
    """
    [0, total) 구간을 연속 구간으로 분할

    Args:
        total: 전체 개수
        parts: 분할 수

    Returns:
        (start, stop) 리스트 (빈 구간 제외)
    """
    parts = max(1, min(parts, total)) if total > 0 else 1
    base, extra = divmod(total, parts)
    ranges = []
    start = 0
    for index in range(parts):
        stop = start + base + (1 if index < extra else 0)
        if stop > start:
            ranges.append((start, stop))
        start = stop
    return ranges


def map_partitions(
    func: Callable[[int, int], T],
    total: int,
    workers: int = 1,
) -> List[T]:
    """
    구간별 함수 실행 (결과는 작업자 인덱스 순서)

    Args:
        func: (start, stop) 을 받는 함수
        total: 전체 개수
        workers: 작업자 수

    Returns:
        구간 순서대로 정렬된 결과 리스트
    """
    ranges = partition(total, workers)
    logger.debug(f"구간 분할: {len(ranges)}개, 작업자 {workers}")

    if workers <= 1 or len(ranges) <= 1:
        return [func(start, stop) for start, stop in ranges]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(func, start, stop) for start, stop in ranges]
        return [future.result() for future in futures]
