"""
Command-line entry point: coefficient tables, kernel values, projections and verification reports.

    python hbergman_cli.py coef --n 3 --alpha 0 --m-max 100 --K 4
    python hbergman_cli.py kernel --n 3 --alpha 0 --x 0.5,0,0 --y 0,0.5,0 --kind bergman
    python hbergman_cli.py project --n 3 --alpha 0 --field sign --x 0.9,0,0
    python hbergman_cli.py verify --check mean_value --n 3 --alpha 0
    python hbergman_cli.py verify-all --jobs 4 --format csv --output data/output/suite.csv

Exit codes: 0 success, 1 a check failed (the report is still written), 2 usage error.
"""
import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utils import get_logger, set_console_level
from config_hbergman import CONFIG
from libs.coefficients import build_coef_table
from libs.errors import ConditionError, DomainError, HBergmanError, UsageError
from libs.geometry import BallPoint, Params
from libs.kernels import bergman_kernel, euclid_kernel, hardy_kernel, kernel_gradient
from libs.report_exporter import write_csv, write_json
from libs.verify import (
    REGISTRY,
    CheckOptions,
    Criterion,
    SignField,
    VerifyReport,
    bergman_project,
    default_suite,
    run_check,
)

logger = get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _point(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="Dimension n >= 3 (default 3; verify-all: all DEFAULT_PAIRS).")
    common.add_argument("--alpha", type=float, default=None, help="Weight exponent alpha > -1 (default 0).")
    common.add_argument("--beta", type=float, default=None, help="Projection / integral weight beta (default alpha).")
    common.add_argument("--p", type=float, default=None, help="Exponent p of L^p checks (default 2).")
    common.add_argument("--m-max", type=int, default=None, dest="m_max",
                        help=f"Largest exactly computed c_m (default {CONFIG['M_MAX']}).")
    common.add_argument("--K", type=int, default=None, help=f"Asymptotic expansion order (default {CONFIG['K']}).")
    common.add_argument("--tol", type=float, default=None,
                        help="Series tolerance for kernel evaluations and hardy pairs, I_m tolerance for coefficient tables.")
    common.add_argument("--jobs", type=int, default=None, help=f"Worker processes (default {CONFIG['JOBS']}).")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Artifact format.")
    common.add_argument("--output", type=str, default=None, help=f"Artifact path (default under {CONFIG['OUTPUT_DIR']}).")
    common.add_argument("--seed", type=int, default=None, help=f"Random seed (default {CONFIG['SEED']}).")
    common.add_argument("--pairs", type=int, default=None, help="Random point pairs for the gradient and hardy checks.")
    common.add_argument("--debug-exponent", action="store_true", dest="debug_exponent",
                        help="Expect alpha+n+1 in kernel_upper (negative control, the check must fail).")
    common.add_argument("--timings", action="store_true", help="Write wall-clock runtimes into JSON reports.")
    common.add_argument("--quiet", action="store_true", help="Only warnings and errors on the console.")

    parser = argparse.ArgumentParser(
        prog="hbergman",
        description="Reproducing kernels of H-harmonic Bergman and Hardy spaces on the hyperbolic ball.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("coef", parents=[common], help="Coefficient table c_m, A_k, B_k, D_k.")
    kernel = commands.add_parser("kernel", parents=[common], help="Evaluate a kernel or its gradient.")
    kernel.add_argument("--x", type=_point, required=True, help="First point, comma-separated.")
    kernel.add_argument("--y", type=_point, required=True, help="Second point, comma-separated.")
    kernel.add_argument("--kind", choices=["bergman", "hardy", "euclid", "grad"], default="bergman")
    project = commands.add_parser("project", parents=[common], help="Bergman projection of a bounded test field.")
    project.add_argument("--field", choices=["one", "sign", "extremal"], default="sign")
    project.add_argument("--x", type=_point, required=True, help="Evaluation point, comma-separated.")
    verify = commands.add_parser("verify", parents=[common], help="Run one registered check.")
    verify.add_argument("--check", choices=sorted(REGISTRY), required=True)
    commands.add_parser("verify-all", parents=[common], help="Run the check suite for DEFAULT_PAIRS.")
    return parser


def _params(args) -> Params:
    return Params(3 if args.n is None else args.n, 0.0 if args.alpha is None else args.alpha)


def _options(args) -> CheckOptions:
    return CheckOptions(p=args.p, beta=args.beta, m_max=args.m_max, K=args.K, tol=args.tol,
                        seed=args.seed, pairs=args.pairs, debug_exponent=args.debug_exponent)


def _output_path(args, stem: str) -> str:
    if args.output:
        return args.output
    return os.path.join(CONFIG["OUTPUT_DIR"], f"{stem}.{args.format}")


def _tag(params: Params) -> str:
    return f"n{params.n}_alpha{params.alpha:g}"


def _require_json(args) -> None:
    if args.format != "json":
        raise UsageError(f"--format {args.format} is only available for verify and verify-all")


def _failed_report(check_id: str, params: Params, options: CheckOptions, error: Exception) -> VerifyReport:
    """A numerical breakdown inside a check counts as a failed check."""
    return VerifyReport(
        check_id=check_id,
        params={**params.as_dict(), "beta": options.beta, "p": options.p},
        grid_spec={"error": f"{type(error).__name__}: {error}"},
        statistics={"completed": 0.0},
        criteria=(Criterion("completed", ">=", 1.0),),
        tolerance=0.0,
    )


def _run_job(check_id: str, params: Params, options: CheckOptions) -> VerifyReport:
    try:
        return run_check(check_id, params, options)
    except (DomainError, ConditionError):
        raise
    except HBergmanError as error:
        logger.error(f"Check {check_id} for {params} broke down: {error}")
        return _failed_report(check_id, params, options, error)


def _run_jobs(jobs: Sequence[Tuple[str, Params, CheckOptions]], workers: int) -> List[VerifyReport]:
    if workers <= 1 or len(jobs) <= 1:
        return [_run_job(*job) for job in jobs]
    logger.info(f"Running {len(jobs)} checks on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_job, *job) for job in jobs]
        return [future.result() for future in futures]


def _write_reports(args, reports: List[VerifyReport], path: str, summary: bool) -> None:
    if args.format == "csv":
        write_csv(reports, path)
        return
    if not summary:
        write_json(reports[0].to_dict(timings=args.timings), path)
        return
    passed = sum(report.passed for report in reports)
    write_json({
        "reports": [report.to_dict(timings=args.timings) for report in reports],
        "passed": passed,
        "failed": len(reports) - passed,
    }, path)


def run_coef(args) -> int:
    _require_json(args)
    params = _params(args)
    table = build_coef_table(params, args.m_max, args.K, args.tol)
    write_json(table.to_dict(), _output_path(args, f"coef_{_tag(params)}"))
    return EXIT_OK


def run_kernel(args) -> int:
    _require_json(args)
    params = _params(args)
    x, y = BallPoint(args.x), BallPoint(args.y)
    if x.n != params.n or y.n != params.n:
        raise UsageError(f"--x and --y must have {params.n} coordinates")
    result = {"kind": args.kind, **params.as_dict(), "x": x.coords.tolist(), "y": y.coords.tolist()}
    if args.kind == "grad":
        vector, tail, terms = kernel_gradient(x, y, build_coef_table(params, args.m_max, args.K), args.tol)
        result.update({"gradient": vector.tolist(), "tail_bound": tail, "terms_used": terms})
    else:
        if args.kind == "bergman":
            value = bergman_kernel(x, y, build_coef_table(params, args.m_max, args.K), args.tol)
        elif args.kind == "hardy":
            value = hardy_kernel(x, y, args.tol)
        else:
            value = euclid_kernel(x, y, params, args.tol)
        result.update({"value": value.value, "tail_bound": value.tail_bound, "terms_used": value.terms_used})
    write_json(result, _output_path(args, f"kernel_{args.kind}_{_tag(params)}"))
    return EXIT_OK


def run_project(args) -> int:
    _require_json(args)
    params = _params(args)
    beta = params.alpha if args.beta is None else args.beta
    table = build_coef_table(params.with_alpha(beta), args.m_max, args.K)
    fields = {
        "one": lambda: SignField.constant(params.n),
        "sign": lambda: SignField.half_space(params.n),
        "extremal": lambda: SignField.extremal(table),
    }
    x = BallPoint(args.x)
    if x.n != params.n:
        raise UsageError(f"--x must have {params.n} coordinates")
    value = bergman_project(fields[args.field](), params, beta, x, table)
    result = {"field": args.field, **params.as_dict(), "beta": beta, "x": x.coords.tolist(), "value": value}
    write_json(result, _output_path(args, f"project_{args.field}_{_tag(params)}"))
    return EXIT_OK


def run_verify(args) -> int:
    params = _params(args)
    options = _options(args)
    report = _run_job(args.check, params, options)
    _write_reports(args, [report], _output_path(args, f"verify_{args.check}_{_tag(params)}"), summary=False)
    return EXIT_OK if report.passed else EXIT_FAILED


def verify_all(args) -> int:
    options = _options(args)
    if args.n is not None or args.alpha is not None:
        pairs = [_params(args)]
    else:
        pairs = [Params(n, alpha) for n, alpha in CONFIG["DEFAULT_PAIRS"]]
    jobs = []
    for index, params in enumerate(pairs):
        jobs.extend((check_id, params, check_options)
                    for check_id, check_options in default_suite(params, options, include_parameter_free=index == 0))
    reports = _run_jobs(jobs, args.jobs or CONFIG["JOBS"])
    _write_reports(args, reports, _output_path(args, "verify_all"), summary=True)
    failed = [report for report in reports if not report.passed]
    logger.info(f"verify-all: {len(reports) - len(failed)} passed, {len(failed)} failed")
    for report in failed:
        logger.warning(f"failed: {report.check_id} {report.params}")
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "coef": run_coef,
    "kernel": run_kernel,
    "project": run_project,
    "verify": run_verify,
    "verify-all": verify_all,
}


def run(args: argparse.Namespace) -> int:
    """Dispatch parsed arguments; returns the exit code."""
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, ConditionError) as error:
        logger.error(f"usage error: {error}")
        print(f"hbergman: error: {error}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.quiet:
        set_console_level(logging.WARNING)
    if args.jobs is not None and args.jobs < 1:
        parser.error("--jobs must be at least 1")
    if args.pairs is not None and args.pairs < 1:
        parser.error("--pairs must be at least 1")
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
