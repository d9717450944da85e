"""카운터 기반 결정적 난수 계약

출력 b(seed, stream, counter) 는 순수 함수이다.
    key   = (seed + stream · 0xD1B54A32D192ED03) mod 2⁶⁴
    state = key + (counter + 1) · 0x9E3779B97F4A7C15 (mod 2⁶⁴)
    out   = splitmix64 종결 혼합(state)
λ 는 out 의 최상위 비트가 1 이면 +1, 아니면 -1.
"""

from dataclasses import dataclass, replace
from typing import Optional
import numpy as np
from utils.logger import get_logger
from utils.parallel import map_partitions

logger = get_logger(__name__)

MASK64 = (1 << 64) - 1
MAX_STREAM = (1 << 32) - 1

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
STREAM_GAMMA = 0xD1B54A32D192ED03
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_SHIFT_30 = np.uint64(30)
_SHIFT_27 = np.uint64(27)
_SHIFT_31 = np.uint64(31)
_SHIFT_63 = np.uint64(63)

# 스트림 번호 약속
SOURCE_STREAM = 0
STATION_A_STREAM = 1
STATION_B_STREAM = 2
JITTER_A_STREAM = 3
JITTER_B_STREAM = 4


def mix64(state: np.ndarray) -> np.ndarray:
    """
    splitmix64 종결 혼합 (uint64 배열, 모듈로 2⁶⁴)

    Args:
        state: uint64 배열

    Returns:
        혼합된 uint64 배열
    """
    z = np.asarray(state, dtype=np.uint64)
    z = (z ^ (z >> _SHIFT_30)) * _MIX_1
    z = (z ^ (z >> _SHIFT_27)) * _MIX_2
    return z ^ (z >> _SHIFT_31)


@dataclass(frozen=True)
class RngContract:
    """(시드, 스트림, 카운터) 결정적 난수 계약"""
    master_seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError(f"시드는 64비트 부호 없는 정수여야 합니다: {self.master_seed}")
        if not 0 <= self.stream_id <= MAX_STREAM:
            raise ValueError(f"스트림 번호는 32비트 부호 없는 정수여야 합니다: {self.stream_id}")
        if not 0 <= self.counter <= MASK64:
            raise ValueError(f"카운터는 64비트 부호 없는 정수여야 합니다: {self.counter}")

    @property
    def key(self) -> int:
        return (self.master_seed + self.stream_id * STREAM_GAMMA) & MASK64

    def with_stream(self, stream_id: int) -> "RngContract":
        return replace(self, stream_id=stream_id)

    def outputs(self, start: int, stop: int) -> np.ndarray:
        """
        시행 [start, stop) 의 64비트 출력

        Args:
            start: 시작 시행 (counter 기준 상대 위치)
            stop: 끝 시행 (미포함)

        Returns:
            uint64 배열
        """
        first = (self.counter + start + 1) & MASK64
        steps = np.arange(stop - start, dtype=np.uint64)
        base = np.array([(self.key + first * GOLDEN_GAMMA) & MASK64], dtype=np.uint64)
        state = base + steps * np.uint64(GOLDEN_GAMMA)
        return mix64(state)

    def orientations(self, start: int, stop: int) -> np.ndarray:
        """시행 [start, stop) 의 λ 배열 (int8, ±1)"""
        top = (self.outputs(start, stop) >> _SHIFT_63).astype(np.int8)
        return (2 * top - 1).astype(np.int8)

    def indices(self, start: int, stop: int, count: int) -> np.ndarray:
        """
        시행별 균등 인덱스 0..count-1

        Raises:
            ValueError: count < 1
        """
        if count < 1:
            raise ValueError(f"선택지 개수는 1 이상이어야 합니다: {count}")
        return (self.outputs(start, stop) % np.uint64(count)).astype(np.int64)

    def offsets(self, start: int, stop: int, width: int) -> np.ndarray:
        """시행별 균등 정수 오프셋 -width..+width"""
        if width < 0:
            raise ValueError(f"오프셋 폭은 0 이상이어야 합니다: {width}")
        if width == 0:
            return np.zeros(stop - start, dtype=np.int64)
        span = np.uint64(2 * width + 1)
        return (self.outputs(start, stop) % span).astype(np.int64) - width


def sample_orientations(n: int, rng: RngContract, workers: Optional[int] = 1) -> np.ndarray:
    """
    λ 표본 생성

    Args:
        n: 시행 수
        rng: 난수 계약
        workers: 작업자 수 (결과는 작업자 수와 무관)

    Returns:
        λ 배열 (int8, ±1)

    Raises:
        ValueError: n < 1
    """
    if n < 1:
        raise ValueError(f"시행 수는 1 이상이어야 합니다: {n}")

    chunks = map_partitions(rng.orientations, n, workers or 1)
    orientations = np.concatenate(chunks)
    logger.debug(f"λ 표본 생성: n={n}, 스트림={rng.stream_id}, 평균={orientations.mean():.5f}")
    return orientations
