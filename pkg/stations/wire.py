"""관측소 기록 TCP 전송 (NDJSON 스트림)

서버는 연결 하나당 한 관측소의 기록 전체를 NDJSON 으로 보내고 쓰기 방향을 닫는다.
클라이언트는 EOF 까지 읽어 줄 단위로 파싱한다.
"""

from typing import Iterator, List, Optional, Tuple
import socket
import time
from stations.events import EventLog, Station
from utils.logger import get_logger

logger = get_logger(__name__)

CHUNK_SIZE = 4096
RETRY_INTERVAL_S = 0.05


class StationLogServer:
    """한 관측소 기록을 제공하는 TCP 서버"""

    def __init__(self, log: EventLog, host: str = "127.0.0.1", port: int = 0, timeout_s: float = 30.0):
        """
        서버 초기화 (생성 시점에 바인드, port=0 이면 임시 포트)

        Args:
            log: 제공할 사건 기록
            host: 바인드 주소
            port: 바인드 포트
            timeout_s: accept 대기 시간 (초)
        """
        self.log = log
        self.timeout_s = timeout_s
        self._socket = socket.create_server((host, port))
        self._socket.settimeout(timeout_s)
        logger.info(f"관측소 {log.station.value} 기록 서버 초기화 완료: {self.address[0]}:{self.address[1]}")

    @property
    def address(self) -> Tuple[str, int]:
        host, port = self._socket.getsockname()[:2]
        return host, port

    def serve_once(self) -> int:
        """
        연결 하나를 받아 기록 전체 전송

        Returns:
            전송한 바이트 수

        Raises:
            OSError: accept 시간 초과 또는 전송 실패
        """
        conn, peer = self._socket.accept()
        payload = self.log.to_bytes()
        with conn:
            conn.sendall(payload)
            conn.shutdown(socket.SHUT_WR)
        logger.info(f"관측소 {self.log.station.value} 기록 전송 완료: {peer[0]}:{peer[1]}, {len(payload)} bytes")
        return len(payload)

    def close(self) -> None:
        self._socket.close()

    def __enter__(self) -> "StationLogServer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def serve_station_log(host: str, port: int, log: EventLog, timeout_s: float = 30.0) -> int:
    """연결 하나에 기록을 보내고 종료 (--listen 모드)"""
    with StationLogServer(log, host, port, timeout_s) as server:
        return server.serve_once()


def _connect(host: str, port: int, timeout_s: float) -> socket.socket:
    # 상대 프로세스가 아직 listen 전일 수 있어 마감 시각까지 재시도
    deadline = time.monotonic() + timeout_s
    while True:
        try:
            return socket.create_connection((host, port), timeout=timeout_s)
        except ConnectionRefusedError:
            if time.monotonic() >= deadline:
                raise
            time.sleep(RETRY_INTERVAL_S)


def _read_lines(sock: socket.socket) -> Iterator[str]:
    buffer = b""
    while True:
        chunk = sock.recv(CHUNK_SIZE)
        if not chunk:
            break
        buffer += chunk
        *lines, buffer = buffer.split(b"\n")
        for line in lines:
            yield line.decode("utf-8")
    if buffer.strip():
        yield buffer.decode("utf-8")


def fetch_station_log(
    host: str,
    port: int,
    timeout_s: float = 30.0,
    station: Optional[Station] = None,
) -> EventLog:
    """
    TCP 로 관측소 기록 수신

    Args:
        host: 서버 주소
        port: 서버 포트
        timeout_s: 연결/수신 대기 시간 (초)
        station: 기대 관측소

    Returns:
        수신한 사건 기록

    Raises:
        OSError: 연결 실패 또는 시간 초과
        ValueError: 레코드 검증 실패
    """
    with _connect(host, port, timeout_s) as sock:
        lines: List[str] = list(_read_lines(sock))
    log = EventLog.from_lines(lines, station)
    logger.info(f"관측소 {log.station.value} 기록 수신 완료: {host}:{port}, {len(log)}건")
    return log
