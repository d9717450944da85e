"""메인 실행 파일"""

import argparse
import math
import sys
import threading
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import pandas as pd
from algebra.multivector import Vector3
from analytics.chsh import AngleQuad, analytic_report, variance_inequality_report
from analytics.correlation import (
    ESTIMATOR_NAMES,
    correlate_standard,
    estimates_from_counts,
    raw_product_mean,
    sampled_counts,
    standard_from_counts,
)
from analytics.error_propagation import RandomBivectorSpec, perspective_change, propagate, taylor_linear_check
from analytics.rng import RngContract
from analytics.verification import run_identity_suite
from model.scores import FOOTNOTE_RAW_PRODUCT_CLAIM, ValidationPolicy, qm_prediction
from optimization.grid_search import AngleGridSearch
from stations.events import EventLog, MatchMode, Station, read_event_log, write_event_log
from stations.matching import MatchPolicy, MatchReport, match_coincidences, pair_estimates
from stations.station import StationTiming, run_station, run_stations, source_orientations
from stations.wire import StationLogServer, fetch_station_log, serve_station_log
from utils import __version__
from utils.helpers import parse_float_list, to_json, write_output
from utils.logger import get_logger, setup_logger
from utils.parallel import resolve_worker_count
from utils.validators import Settings, load_settings

logger = get_logger(__name__)

CURVE_COLUMNS = ["beta_deg", "scalar", "residual_norm", "stderr", "n"]
SIMULATE_COLUMNS = ["estimator", "alpha_deg", "beta_deg", "scalar_part", "residual_norm", "stderr", "n", "qm_prediction"]
MATCH_CHOICES = {"by-trial": MatchMode.BY_TRIAL_ID, "by-time": MatchMode.BY_TIME_WINDOW}


def build_parser() -> argparse.ArgumentParser:
    """명령행 파서 생성"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="설정 파일 경로 (기본: config/settings.yaml)")
    common.add_argument("--log-level", type=str, default=None, help="로그 레벨 (DEBUG, INFO, WARNING, ERROR)")
    common.add_argument("--log-file", type=str, default=None, help="로그 파일 경로")
    common.add_argument("--threads", type=int, default=None, help="작업자 수 (HOPFSIM_THREADS 가 상한)")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", type=str, choices=["csv", "json"], default=None, help="출력 형식")
    output.add_argument("--out", type=str, default=None, help="출력 파일 경로 (없으면 stdout)")

    parser = argparse.ArgumentParser(description="S³ 국소 모델 측정 사건 시뮬레이터")
    subparsers = parser.add_subparsers(dest="command", help="명령어")

    # 대수 항등식 검증
    verify_parser = subparsers.add_parser("verify", help="대수 항등식 검증", parents=[common])
    verify_parser.add_argument("--samples", type=int, default=None, help="계열별 표본 수")
    verify_parser.add_argument("--seed", type=int, default=None, help="표본 시드")

    # 고정 각도 상관 추정
    simulate_parser = subparsers.add_parser("simulate", help="고정 각도 상관 추정", parents=[common, output])
    simulate_parser.add_argument("--alpha-deg", type=float, default=None, help="A 각도 (도)")
    simulate_parser.add_argument("--beta-deg", type=float, default=None, help="B 각도 (도)")
    simulate_parser.add_argument("--trials", type=int, default=None, help="시행 수")
    simulate_parser.add_argument("--seed", type=int, default=None, help="마스터 시드")
    simulate_parser.add_argument(
        "--estimator", type=str, default=None, choices=list(ESTIMATOR_NAMES) + ["all"], help="추정기"
    )

    # β 에 따른 상관 곡선
    curve_parser = subparsers.add_parser("curve", help="β 에 따른 상관 곡선", parents=[common, output])
    curve_parser.add_argument("--alpha-deg", type=float, default=None, help="A 각도 (도)")
    curve_parser.add_argument("--beta-start", type=float, default=None, help="β 시작 (도)")
    curve_parser.add_argument("--beta-end", type=float, default=None, help="β 끝 (도, 포함)")
    curve_parser.add_argument("--beta-step", type=float, default=None, help="β 간격 (도)")
    curve_parser.add_argument("--trials", type=int, default=None, help="시행 수")
    curve_parser.add_argument("--seed", type=int, default=None, help="마스터 시드")

    # CHSH 보고서
    chsh_parser = subparsers.add_parser("chsh", help="CHSH 문자열과 상한", parents=[common])
    chsh_parser.add_argument("--out", type=str, default=None, help="출력 파일 경로")
    chsh_parser.add_argument("--angles", type=str, default=None, help="α,α′,β,β′ (도)")
    chsh_parser.add_argument("--trials", type=int, default=None, help="시행 수")
    chsh_parser.add_argument("--seed", type=int, default=None, help="마스터 시드")
    chsh_parser.add_argument("--analytic", action="store_true", help="해석적 상관 사용")

    # 사중쌍 스캔
    scan_parser = subparsers.add_parser("scan", help="|S| 최대 사중쌍 스캔", parents=[common])
    scan_parser.add_argument("--out", type=str, default=None, help="출력 파일 경로")
    scan_parser.add_argument("--grid-step", type=float, default=None, help="격자 간격 (도)")
    scan_parser.add_argument("--trials", type=int, default=None, help="시행 수 (없으면 해석적 상관)")
    scan_parser.add_argument("--seed", type=int, default=None, help="마스터 시드")

    # 두 관측소 실행
    stations_parser = subparsers.add_parser("stations", help="두 관측소 실행과 사후 매칭", parents=[common, output])
    stations_parser.add_argument("--trials", type=int, default=None, help="시행 수")
    stations_parser.add_argument("--seed", type=int, default=None, help="마스터 시드")
    stations_parser.add_argument("--angles-a", type=str, default=None, help="A 각도 목록 (도, 쉼표 구분)")
    stations_parser.add_argument("--angles-b", type=str, default=None, help="B 각도 목록 (도, 쉼표 구분)")
    stations_parser.add_argument("--mode", type=str, choices=["inproc", "tcp"], default="inproc", help="배치 방식")
    endpoint = stations_parser.add_mutually_exclusive_group()
    endpoint.add_argument("--listen", type=str, default=None, help="B 관측소로 HOST:PORT 에서 기록 제공")
    endpoint.add_argument("--connect", type=str, default=None, help="A 관측소로 HOST:PORT 에서 B 기록 수신")
    stations_parser.add_argument("--match", type=str, choices=list(MATCH_CHOICES), default=None, help="매칭 방식")
    stations_parser.add_argument("--window-ns", type=int, default=None, help="시간 창 (ns)")
    stations_parser.add_argument("--jitter-ns", type=int, default=None, help="사건별 지터 폭 (ns)")
    stations_parser.add_argument("--log-dir", type=str, default=None, help="NDJSON 사건 기록 저장 디렉토리")

    # 저장된 기록 매칭
    match_parser = subparsers.add_parser("match", help="NDJSON 사건 기록 매칭", parents=[common, output])
    match_parser.add_argument("--log-a", type=str, required=True, help="관측소 A 기록")
    match_parser.add_argument("--log-b", type=str, required=True, help="관측소 B 기록")
    match_parser.add_argument("--match", type=str, choices=list(MATCH_CHOICES), default=None, help="매칭 방식")
    match_parser.add_argument("--window-ns", type=int, default=None, help="시간 창 (ns)")

    # 오차 전파
    errorprop_parser = subparsers.add_parser("errorprop", help="쌍벡터 오차 전파", parents=[common])
    errorprop_parser.add_argument("--p", type=float, default=None, help="확률 쌍벡터 크기 p")
    errorprop_parser.add_argument("--n-vec", type=str, default=None, help="n̂ (x,y,z)")
    errorprop_parser.add_argument("--v-vec", type=str, default=None, help="v = I·v̂ 의 v̂ (x,y,z, 기본 n̂)")
    errorprop_parser.add_argument("--samples", type=int, default=None, help="표본 수")
    errorprop_parser.add_argument("--seed", type=int, default=None, help="시드")
    errorprop_parser.add_argument("--out", type=str, default=None, help="출력 파일 경로")

    return parser


def _pick(value: Any, default: Any) -> Any:
    return default if value is None else value


def _provenance(command: str, seed: Optional[int], trials: Optional[int]) -> Dict[str, Any]:
    return {"command": command, "seed": seed, "trials": trials, "version": __version__}


def _policy(settings: Settings) -> ValidationPolicy:
    if settings.model.validation == "debug":
        return ValidationPolicy.debug()
    return ValidationPolicy.release(settings.model.release_stride)


def _endpoint(text: str) -> Tuple[str, int]:
    """HOST:PORT 파싱"""
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise ValueError(f"HOST:PORT 형식이 아닙니다: {text}")
    try:
        return host, int(port)
    except ValueError:
        raise ValueError(f"포트 번호가 잘못되었습니다: {text}")


def run_verify(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """대수 항등식 검증 (모두 통과해야 0)"""
    samples = _pick(args.samples, settings.verify.samples)
    seed = _pick(args.seed, settings.verify.seed)
    checks = run_identity_suite(samples, seed, settings.verify.tolerance)
    write_output("".join(check.summary_line() + "\n" for check in checks))
    return 0 if all(check.passed for check in checks) else 1


def run_simulate(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """고정 각도 상관 추정"""
    experiment = settings.experiment
    alpha_deg = _pick(args.alpha_deg, experiment.alpha_deg)
    beta_deg = _pick(args.beta_deg, experiment.beta_deg)
    trials = _pick(args.trials, experiment.trials)
    seed = _pick(args.seed, experiment.master_seed)
    estimator = _pick(args.estimator, experiment.estimator)
    output_format = _pick(args.format, experiment.output_format)
    output_path = _pick(args.out, experiment.output_path)

    alpha, beta = math.radians(alpha_deg), math.radians(beta_deg)
    rng = RngContract(seed)
    policy = _policy(settings)
    names = list(ESTIMATOR_NAMES) if estimator == "all" else [estimator]
    counts = sampled_counts(alpha, beta, trials, rng, workers, policy)
    estimates = estimates_from_counts(alpha, beta, counts, names)
    mean_raw_product = raw_product_mean(alpha, beta, counts)

    if output_format == "csv":
        frame = pd.DataFrame(
            [
                {
                    "estimator": estimate.estimator,
                    "alpha_deg": alpha_deg,
                    "beta_deg": beta_deg,
                    "scalar_part": estimate.scalar_part,
                    "residual_norm": estimate.residual_norm,
                    "stderr": estimate.stderr,
                    "n": estimate.n,
                    "qm_prediction": qm_prediction(alpha, beta),
                }
                for estimate in estimates
            ],
            columns=SIMULATE_COLUMNS,
        )
        write_output(frame.to_csv(index=False, lineterminator="\n"), output_path)
        return 0

    if len(estimates) == 1:
        payload = estimates[0].to_dict()
    else:
        payload = {"estimates": [estimate.to_dict() for estimate in estimates]}
    payload["standard_scalar"] = standard_from_counts(alpha, beta, counts).scalar_part
    payload["raw_product_mean"] = mean_raw_product
    payload["raw_product_claim"] = FOOTNOTE_RAW_PRODUCT_CLAIM
    payload["provenance"] = _provenance("simulate", seed, trials)
    write_output(to_json(payload), output_path)
    return 0


def _curve_betas(start: float, end: float, step: float) -> List[float]:
    if step <= 0:
        raise ValueError(f"β 간격은 양수여야 합니다: {step}")
    if end < start:
        raise ValueError(f"β 구간이 잘못되었습니다: {start} > {end}")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def run_curve(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """β 에 따른 표준점수 상관 곡선"""
    experiment, curve = settings.experiment, settings.curve
    alpha_deg = _pick(args.alpha_deg, experiment.alpha_deg)
    trials = _pick(args.trials, experiment.trials)
    seed = _pick(args.seed, experiment.master_seed)
    output_format = _pick(args.format, "csv")
    betas = _curve_betas(
        _pick(args.beta_start, curve.beta_start_deg),
        _pick(args.beta_end, curve.beta_end_deg),
        _pick(args.beta_step, curve.beta_step_deg),
    )

    rng = RngContract(seed)
    policy = _policy(settings)
    rows = []
    for beta_deg in betas:
        estimate = correlate_standard(math.radians(alpha_deg), math.radians(beta_deg), trials, rng, workers, policy)
        rows.append(
            {
                "beta_deg": beta_deg,
                "scalar": estimate.scalar_part,
                "residual_norm": estimate.residual_norm,
                "stderr": estimate.stderr,
                "n": estimate.n,
            }
        )
    frame = pd.DataFrame(rows, columns=CURVE_COLUMNS)

    if output_format == "csv":
        write_output(frame.to_csv(index=False, lineterminator="\n"), args.out)
    else:
        payload = {
            "alpha_deg": alpha_deg,
            "rows": frame.to_dict(orient="records"),
            "provenance": _provenance("curve", seed, trials),
        }
        write_output(to_json(payload), args.out)
    return 0


def run_chsh(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """CHSH 보고서"""
    experiment = settings.experiment
    angles = parse_float_list(args.angles, expected=4) if args.angles else experiment.chsh_angles_deg
    quad = AngleQuad.from_degrees(angles)
    seed = _pick(args.seed, experiment.master_seed)
    trials = _pick(args.trials, experiment.trials)

    if args.analytic:
        report = analytic_report(quad)
        seed, trials = None, None
    else:
        report = variance_inequality_report(quad, trials, RngContract(seed), workers, _policy(settings))

    payload = report.to_dict()
    payload["provenance"] = _provenance("chsh", seed, trials)
    write_output(to_json(payload), args.out)
    return 0


def run_scan(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """격자 사중쌍 |S| 최대 탐색"""
    grid_step = _pick(args.grid_step, settings.scan.grid_step_deg)
    trials = _pick(args.trials, settings.scan.trials)
    seed = _pick(args.seed, settings.experiment.master_seed)

    if trials is None:
        correlator = qm_prediction
        seed = None
    else:
        # 표준점수 스칼라 부분은 λ 표본과 무관하므로 표본 개수 하나로 모든 격자점을 평가한다
        counts = sampled_counts(0.0, 0.0, trials, RngContract(seed), workers, _policy(settings))

        def correlator(alpha: float, beta: float) -> float:
            return standard_from_counts(alpha, beta, counts).scalar_part

    search = AngleGridSearch({"grid_step_deg": grid_step, "max_workers": workers})
    result = search.scan(correlator)
    payload = result.to_dict()
    payload["provenance"] = _provenance("scan", seed, trials)
    write_output(to_json(payload), args.out)
    return 0


def _match_policy(args: argparse.Namespace, settings: Settings) -> MatchPolicy:
    config = settings.stations
    mode = MATCH_CHOICES[args.match] if args.match else MatchMode(config.match)
    jitter = getattr(args, "jitter_ns", None)
    return MatchPolicy(mode, _pick(args.window_ns, config.window_ns), _pick(jitter, config.jitter_ns))


def _write_match_output(
    args: argparse.Namespace,
    report: MatchReport,
    command: str,
    seed: Optional[int],
    trials: Optional[int],
    output_format: str,
) -> None:
    frame = pair_estimates(report.records)
    if output_format == "csv":
        write_output(frame.to_csv(index=False, lineterminator="\n"), args.out)
        return
    payload = {
        "match": report.to_dict(),
        "pairs": frame.to_dict(orient="records"),
        "provenance": _provenance(command, seed, trials),
    }
    write_output(to_json(payload), args.out)


def _save_logs(log_dir: Optional[str], *logs: EventLog) -> None:
    if not log_dir:
        return
    for log in logs:
        write_event_log(log, str(Path(log_dir) / f"station_{log.station.value}.ndjson"))


def run_stations_command(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """두 관측소 실행 (프로세스 내 또는 TCP)"""
    experiment = settings.experiment.model_copy(
        update={
            "trials": _pick(args.trials, settings.experiment.trials),
            "master_seed": _pick(args.seed, settings.experiment.master_seed),
            "angles_a_deg": parse_float_list(args.angles_a) if args.angles_a else settings.experiment.angles_a_deg,
            "angles_b_deg": parse_float_list(args.angles_b) if args.angles_b else settings.experiment.angles_b_deg,
        }
    )
    if experiment.trials < 1:
        raise ValueError(f"시행 수는 1 이상이어야 합니다: {experiment.trials}")
    config = settings.stations
    policy = _match_policy(args, settings)
    timing = StationTiming(config.period_ns, config.base_ns)
    output_format = _pick(args.format, "json")

    if args.mode == "inproc":
        if args.listen or args.connect:
            raise ValueError("--listen/--connect 는 --mode tcp 에서만 사용할 수 있습니다")
        log_a, log_b = run_stations(experiment, policy, timing, workers=min(workers, 2))
    else:
        lam = source_orientations(experiment.master_seed, experiment.trials)

        def station(which: Station) -> EventLog:
            angles = experiment.angles_a_deg if which == Station.A else experiment.angles_b_deg
            return run_station(
                which, experiment.run_id, angles, lam, experiment.master_seed, policy.jitter_ns, timing
            )

        if args.listen:
            host, port = _endpoint(args.listen)
            log_b = station(Station.B)
            _save_logs(args.log_dir, log_b)
            sent = serve_station_log(host, port, log_b, config.timeout_s)
            payload = {
                "served": Station.B.value,
                "events": len(log_b),
                "bytes": sent,
                "provenance": _provenance("stations", experiment.master_seed, experiment.trials),
            }
            write_output(to_json(payload), args.out)
            return 0

        log_a = station(Station.A)
        if args.connect:
            host, port = _endpoint(args.connect)
            log_b = fetch_station_log(host, port, config.timeout_s, Station.B)
        else:
            with StationLogServer(station(Station.B), config.host, 0, config.timeout_s) as server:
                host, port = server.address
                serving = threading.Thread(target=server.serve_once, daemon=True)
                serving.start()
                log_b = fetch_station_log(host, port, config.timeout_s, Station.B)
                serving.join(config.timeout_s)

    _save_logs(args.log_dir, log_a, log_b)
    report = match_coincidences(log_a, log_b, policy)
    _write_match_output(args, report, "stations", experiment.master_seed, experiment.trials, output_format)
    return 0


def run_match(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """저장된 NDJSON 기록 매칭"""
    log_a = read_event_log(args.log_a)
    log_b = read_event_log(args.log_b)
    report = match_coincidences(log_a, log_b, _match_policy(args, settings))
    _write_match_output(args, report, "match", None, None, _pick(args.format, "json"))
    return 0


def run_errorprop(args: argparse.Namespace, settings: Settings, workers: int) -> int:
    """쌍벡터 오차 전파"""
    config = settings.error_propagation
    p = _pick(args.p, config.p)
    n_vec = parse_float_list(args.n_vec, expected=3) if args.n_vec else config.n_vec
    v_vec = parse_float_list(args.v_vec, expected=3) if args.v_vec else (config.v_vec or n_vec)
    samples = _pick(args.samples, config.samples)
    seed = _pick(args.seed, config.seed)

    spec = RandomBivectorSpec(p, Vector3(*n_vec), RngContract(seed))
    v = Vector3(*v_vec).dual()
    result = propagate(v, spec, samples, workers)
    perspective_change(result, v)

    payload = result.to_dict()
    payload["taylor_deviation"] = taylor_linear_check(v, spec, samples, workers)
    payload["provenance"] = _provenance("errorprop", seed, samples)
    write_output(to_json(payload), args.out)
    return 0


COMMANDS = {
    "verify": run_verify,
    "simulate": run_simulate,
    "curve": run_curve,
    "chsh": run_chsh,
    "scan": run_scan,
    "stations": run_stations_command,
    "match": run_match,
    "errorprop": run_errorprop,
}


def run(argv: Optional[List[str]] = None) -> int:
    """
    명령 실행

    Args:
        argv: 명령행 인자 (None 이면 sys.argv[1:])

    Returns:
        종료 코드 (0 성공, 1 실행 오류, 2 사용법 오류)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    setup_logger(log_level=args.log_level or "WARNING", log_file=args.log_file)

    try:
        settings = load_settings(args.config)
        logging_config = settings.logging
        setup_logger(
            log_level=args.log_level or logging_config.level,
            log_file=args.log_file or logging_config.file,
            error_file=logging_config.error_file,
            rotation=logging_config.rotation,
            retention=logging_config.retention,
        )
        workers = resolve_worker_count(_pick(args.threads, settings.parallel.max_workers))
        logger.info(f"명령 시작: {args.command} (작업자 {workers})")
        code = COMMANDS[args.command](args, settings, workers)
    except (ValueError, RuntimeError, OSError) as e:
        logger.error(f"{args.command} 실행 실패: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1

    logger.info(f"명령 종료: {args.command} (코드 {code})")
    return code


def main():
    """메인 함수"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
