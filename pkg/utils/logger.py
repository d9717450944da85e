"""로깅 유틸리티 모듈"""

import sys
from pathlib import Path
from typing import Optional
from loguru import logger

CONSOLE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[name]}:{function}:{line} | {message}"
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {extra[name]}:{function}:{line} | {message}"

logger.configure(extra={"name": "hopfsim"})


def setup_logger(
    log_level: str = "WARNING",
    log_file: Optional[str] = None,
    error_file: Optional[str] = None,
    rotation: str = "10 MB",
    retention: str = "7 days",
) -> None:
    """
    로거 설정

    표준 출력은 JSON/CSV 결과 전용이므로 콘솔 로그는 stderr 로 보낸다.

    Args:
        log_level: 로그 레벨 (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: 일반 로그 파일 경로
        error_file: 에러 로그 파일 경로
        rotation: 로그 파일 로테이션 크기
        retention: 로그 파일 보관 기간
    """
    logger.remove()

    logger.add(
        sys.stderr,
        format=CONSOLE_FORMAT,
        level=log_level.upper(),
        colorize=None,
    )

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            format=FILE_FORMAT,
            level="DEBUG",
            rotation=rotation,
            retention=retention,
            encoding="utf-8",
        )

    if error_file:
        Path(error_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            error_file,
            format=FILE_FORMAT,
            level="ERROR",
            rotation=rotation,
            retention=retention,
            encoding="utf-8",
        )


def get_logger(name: str = __name__):
    """
    로거 인스턴스 반환

    Args:
        name: 로거 이름

    Returns:
        로거 인스턴스
    """
    return logger.bind(name=name)
