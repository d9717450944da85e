"""공통 헬퍼 함수"""

from typing import Any, Dict, List, Optional
from pathlib import Path
import json
import math
import yaml
from utils.logger import get_logger

logger = get_logger(__name__)


def load_yaml(file_path: str) -> Dict[str, Any]:
    """
    YAML 파일 로드

    Args:
        file_path: YAML 파일 경로

    Returns:
        설정 딕셔너리

    Raises:
        FileNotFoundError: 파일이 없을 때
    """
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"파일을 찾을 수 없습니다: {file_path}")

    with open(path, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)

    logger.debug(f"YAML 파일 로드 완료: {file_path}")
    return config or {}


def parse_float_list(text: str, expected: Optional[int] = None) -> List[float]:
    """
    쉼표로 구분된 실수 목록 파싱

    Args:
        text: "0,45,22.5,67.5" 형식 문자열
        expected: 기대 개수 (None 이면 검사하지 않음)

    Returns:
        실수 리스트

    Raises:
        ValueError: 파싱 실패, 유한하지 않은 값, 개수 불일치
    """
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        values = [float(item) for item in items]
    except ValueError:
        raise ValueError(f"실수 목록을 파싱할 수 없습니다: {text}")

    if not values:
        raise ValueError(f"빈 목록입니다: {text!r}")
    if not all(math.isfinite(value) for value in values):
        raise ValueError(f"유한하지 않은 값이 있습니다: {text}")
    if expected is not None and len(values) != expected:
        raise ValueError(f"값 {expected}개가 필요합니다: {text}")
    return values


def to_json(data: Dict[str, Any]) -> str:
    """
    결과 딕셔너리를 JSON 문자열로 변환 (키 순서 유지, 마지막 개행 포함)

    Args:
        data: 직렬화할 데이터

    Returns:
        JSON 문자열
    """
    return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_output(text: str, output_path: Optional[str] = None) -> None:
    """
    결과 출력 (파일 또는 표준 출력)

    Args:
        text: 출력할 문자열
        output_path: 파일 경로 (None 이면 stdout)
    """
    if output_path is None:
        print(text, end="")
        return

    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"결과 저장 완료: {path}")
