"""설정 스키마 및 검증 유틸리티"""

from pathlib import Path
from typing import List, Literal, Optional
import math
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from utils.helpers import load_yaml
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parent.parent / "config" / "settings.yaml"

UINT64_MAX = 2 ** 64 - 1


def _check_finite(values: List[float]) -> List[float]:
    for value in values:
        if not math.isfinite(value):
            raise ValueError(f"각도는 유한해야 합니다: {value}")
    return values


class ExperimentConfig(BaseModel):
    """실험 설정 스키마 (한 번의 실행을 완전히 결정)"""
    model_config = ConfigDict(extra="forbid")

    alpha_deg: float = 0.0
    beta_deg: float = 22.5
    angles_a_deg: List[float] = Field(default_factory=lambda: [0.0, 45.0], min_length=1)
    angles_b_deg: List[float] = Field(default_factory=lambda: [22.5, 67.5], min_length=1)
    chsh_angles_deg: List[float] = Field(
        default_factory=lambda: [0.0, 45.0, 22.5, 67.5], min_length=4, max_length=4
    )
    trials: int = Field(100_000, ge=1)
    master_seed: int = Field(42, ge=0, le=UINT64_MAX)
    estimator: Literal["standard", "raw_normalized", "coincidence", "all"] = "standard"
    output_format: Literal["csv", "json"] = "json"
    output_path: Optional[str] = None
    run_id: str = Field("run-0001", min_length=1)

    @field_validator("alpha_deg", "beta_deg")
    @classmethod
    def _finite_angle(cls, value: float) -> float:
        return _check_finite([value])[0]

    @field_validator("angles_a_deg", "angles_b_deg", "chsh_angles_deg")
    @classmethod
    def _finite_angles(cls, values: List[float]) -> List[float]:
        return _check_finite(values)


class CurveConfig(BaseModel):
    """상관 곡선 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    beta_start_deg: float = 0.0
    beta_end_deg: float = 180.0
    beta_step_deg: float = Field(7.5, gt=0)

    @model_validator(mode="after")
    def _check_range(self) -> "CurveConfig":
        if self.beta_end_deg < self.beta_start_deg:
            raise ValueError(f"beta 구간이 잘못되었습니다: {self.beta_start_deg} > {self.beta_end_deg}")
        return self


class ScanConfig(BaseModel):
    """각도 사중쌍 스캔 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    grid_step_deg: float = Field(7.5, gt=0)
    trials: Optional[int] = Field(None, ge=1)


class StationsConfig(BaseModel):
    """두 관측소 프로토콜 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    match: Literal["by_trial_id", "by_time_window"] = "by_trial_id"
    window_ns: int = Field(1000, ge=1)
    jitter_ns: int = Field(0, ge=0)
    period_ns: int = Field(10_000, ge=1)
    base_ns: int = Field(0, ge=0)
    host: str = "127.0.0.1"
    port: int = Field(50555, ge=0, le=65535)
    timeout_s: float = Field(30.0, gt=0)


class ErrorPropConfig(BaseModel):
    """오차 전파 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    p: float = Field(1.0, ge=0.0, le=1.0)
    n_vec: List[float] = Field(default_factory=lambda: [0.0, 0.0, 1.0], min_length=3, max_length=3)
    v_vec: Optional[List[float]] = Field(None, min_length=3, max_length=3)
    samples: int = Field(100_000, ge=1)
    seed: int = Field(7, ge=0, le=UINT64_MAX)


class ModelConfig(BaseModel):
    """원점수 검증 정책 스키마"""
    model_config = ConfigDict(extra="forbid")

    validation: Literal["debug", "release"] = "release"
    release_stride: int = Field(1024, ge=1)


class VerifyConfig(BaseModel):
    """항등식 검증 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    samples: int = Field(10_000, ge=1)
    seed: int = Field(2024, ge=0, le=UINT64_MAX)
    tolerance: float = Field(1e-12, gt=0)


class ParallelConfig(BaseModel):
    """병렬 처리 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    max_workers: Optional[int] = Field(None, ge=1)


class LoggingConfig(BaseModel):
    """로깅 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    level: Literal["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    file: Optional[str] = None
    error_file: Optional[str] = None
    rotation: str = "10 MB"
    retention: str = "7 days"


class Settings(BaseModel):
    """전체 설정 스키마"""
    model_config = ConfigDict(extra="forbid")

    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)
    curve: CurveConfig = Field(default_factory=CurveConfig)
    scan: ScanConfig = Field(default_factory=ScanConfig)
    stations: StationsConfig = Field(default_factory=StationsConfig)
    error_propagation: ErrorPropConfig = Field(default_factory=ErrorPropConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    parallel: ParallelConfig = Field(default_factory=ParallelConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    설정 파일 로드 및 검증

    Args:
        config_path: 설정 파일 경로 (None 이면 기본 경로, 없으면 기본값 사용)

    Returns:
        검증된 설정

    Raises:
        FileNotFoundError: 명시한 설정 파일이 없을 때
        pydantic.ValidationError: 설정 검증 실패 시
    """
    if config_path is None:
        if not DEFAULT_SETTINGS_PATH.exists():
            logger.debug("기본 설정 파일이 없어 내장 기본값을 사용합니다")
            return Settings()
        config_path = str(DEFAULT_SETTINGS_PATH)

    raw = load_yaml(config_path)
    settings = Settings.model_validate(raw)
    logger.debug(f"설정 검증 완료: {config_path}")
    return settings
