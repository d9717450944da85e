"""각도 사중쌍 그리드 스캔 모듈"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Tuple
import math
import sys
import numpy as np
from tqdm import tqdm
from analytics.chsh import AngleQuad, chsh_bound_sine
from utils.logger import get_logger

logger = get_logger(__name__)

TIE_TOLERANCE = 1e-12

Correlator = Callable[[float, float], float]


@dataclass(frozen=True)
class ScanResult:
    """스캔 결과"""
    quad: AngleQuad
    value: float
    string_value: float
    grid_step: float
    quads_scanned: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quad_deg": list(self.quad.degrees()),
            "value": self.value,
            "string_value": self.string_value,
            "bound": chsh_bound_sine(self.quad),
            "grid_step": self.grid_step,
            "quads_scanned": self.quads_scanned,
        }


def grid_size(grid_step: float) -> int:
    """
    360° 를 나누는 격자 점 개수

    Raises:
        ValueError: 간격이 양수가 아니거나 360 을 나누지 않을 때
    """
    if not math.isfinite(grid_step) or grid_step <= 0:
        raise ValueError(f"격자 간격은 양수여야 합니다: {grid_step}")
    count = int(round(360.0 / grid_step))
    if count < 1 or abs(count * grid_step - 360.0) > 1e-9:
        raise ValueError(f"격자 간격이 360 을 나누지 않습니다: {grid_step}")
    return count


class AngleGridSearch:
    """CHSH |S| 최대화 그리드 스캔 클래스"""

    def __init__(self, config: Dict[str, Any]):
        """
        그리드 스캔 초기화

        Args:
            config: 스캔 설정 (grid_step_deg, max_workers, progress)
        """
        self.config = config
        self.grid_step = float(config.get("grid_step_deg", 7.5))
        self.size = grid_size(self.grid_step)
        self.max_workers = int(config.get("max_workers", 1) or 1)
        self.progress = bool(config.get("progress", sys.stderr.isatty()))
        logger.info(f"그리드 스캔 초기화 완료: 간격 {self.grid_step}°, 격자 {self.size}점")

    def grid_angles(self) -> np.ndarray:
        """격자 각도 (라디안)"""
        return np.radians(np.arange(self.size) * self.grid_step)

    def correlation_matrix(self, correlator: Correlator) -> np.ndarray:
        """
        격자 상관 행렬 E[i, k] = correlator(θ_i, θ_k)

        Args:
            correlator: 상관 함수 (라디안)

        Returns:
            (size, size) 배열
        """
        angles = self.grid_angles()
        matrix = np.empty((self.size, self.size))
        for i, alpha in enumerate(angles):
            for k, beta in enumerate(angles):
                matrix[i, k] = correlator(float(alpha), float(beta))
        return matrix

    @staticmethod
    def _best_in_slice(matrix: np.ndarray, i: int) -> Tuple[float, float, int, int, int]:
        """α 인덱스 i 고정 시 |S| 최대값과 사전순 최소 (j, k, l)"""
        row = matrix[i]
        # S[j, k, l] = E[i,k] + E[i,l] + E[j,k] - E[j,l]
        values = row[None, :, None] + row[None, None, :] + matrix[:, :, None] - matrix[:, None, :]
        magnitude = np.abs(values)
        best = float(magnitude.max())
        flat = int(np.flatnonzero(magnitude >= best - TIE_TOLERANCE)[0])
        j, k, l = np.unravel_index(flat, values.shape)
        return best, float(values[j, k, l]), int(j), int(k), int(l)

    def scan(self, correlator: Correlator) -> ScanResult:
        """
        전체 사중쌍 스캔

        바깥 α 인덱스 단위로 병렬 처리하고 인덱스 순서로 축약한다 (동률이면 사전순 최소 사중쌍).

        Args:
            correlator: 상관 함수 (라디안)

        Returns:
            ScanResult
        """
        matrix = self.correlation_matrix(correlator)
        total = self.size ** 4
        logger.info(f"총 {total}개 사중쌍 스캔 시작")

        indices = range(self.size)
        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                slices = list(
                    tqdm(
                        executor.map(lambda i: self._best_in_slice(matrix, i), indices),
                        total=self.size,
                        desc="사중쌍 스캔",
                        disable=not self.progress,
                    )
                )
        else:
            slices = [
                self._best_in_slice(matrix, i)
                for i in tqdm(indices, total=self.size, desc="사중쌍 스캔", disable=not self.progress)
            ]

        best_value = float("-inf")
        best = None
        for i, (value, signed, j, k, l) in enumerate(slices):
            if value > best_value + TIE_TOLERANCE:
                best_value = value
                best = (i, j, k, l, signed)

        i, j, k, l, signed = best
        quad = AngleQuad.from_degrees([index * self.grid_step for index in (i, j, k, l)])
        logger.info(f"최대 |S|: {best_value:.12f} @ {quad.degrees()}")

        return ScanResult(
            quad=quad,
            value=best_value,
            string_value=signed,
            grid_step=self.grid_step,
            quads_scanned=total,
        )


def scan_max(grid_step: float, correlator: Correlator, workers: int = 1) -> Tuple[AngleQuad, float]:
    """
    격자 사중쌍 중 |S| 최대값 탐색

    Args:
        grid_step: 격자 간격 (도, 360 을 나눠야 함)
        correlator: 상관 함수 (라디안)
        workers: 작업자 수

    Returns:
        (최대 사중쌍, |S|)
    """
    result = AngleGridSearch({"grid_step_deg": grid_step, "max_workers": workers, "progress": False}).scan(correlator)
    return result.quad, result.value
