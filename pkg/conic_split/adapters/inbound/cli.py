"""
Command-line surface: solve, generate, bench and compare.

Exit codes:
    0  converged (or the command completed)
    1  bad input or unreadable/unwritable file
    2  iteration or time budget exhausted
    3  diverged
    4  factorization failure
"""
import argparse
import json
import logging
import sys
import uuid
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as SettingsError

from conic_split import __version__
from conic_split.adapters.outbound.persistence import load_bench_request
from conic_split.application import (
    CompareRequest, CompareSolutionsUseCase, GenerateProblemUseCase, GenerateRequest,
    RunBenchmarkUseCase, RunConfig, SolveProblemUseCase,
)
from conic_split.application.dto import EXIT_BAD_INPUT, EXIT_CONVERGED, exit_code_for
from conic_split.domain.errors import DomainError, FactorizationError, ValidationError
from conic_split.domain.value_objects import (
    Algorithm, GenSpec, PreconditionerKind, ProblemFamily, Schedule, SolveOptions, SolveStatus,
)
from conic_split.infrastructure.config import AppSettings, get_settings
from conic_split.infrastructure.container import Container, initialize_container
from conic_split.observability.logger import clear_run_context, set_run_context, setup_structured_logging
from conic_split.observability.metrics import SolverMetrics

logger = logging.getLogger(__name__)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, help="Cap BLAS/OpenMP threads (CONIC_SPLIT_THREADS wins)")
    common.add_argument("--metrics-out", type=Path, help="Write Prometheus text metrics here on exit")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Override the log level")
    common.add_argument("--json-logs", action="store_true", default=None, help="Emit JSON log lines")
    common.add_argument("--log-file", help="Also log to this file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    ap = argparse.ArgumentParser(prog="conic-split", description="Conic splitting solver and benchmark harness")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="Solve one problem file")
    solve.add_argument("--problem", "-p", type=Path, required=True)
    solve.add_argument("--algorithm", "-a", choices=[a.value for a in Algorithm], default=Algorithm.SPLIT.value)
    solve.add_argument("--mu", type=float)
    solve.add_argument("--precondition", choices=[p.value for p in PreconditionerKind],
                       default=PreconditionerKind.NONE.value)
    solve.add_argument("--t", type=float, help="Compression parameter of adaptive conditioning")
    solve.add_argument("--condition", help='Schedule: "start:stride[:stop]", "once:K" or "none"')
    solve.add_argument("--tol", type=float, help="Sets primal, dual and gap tolerances together")
    solve.add_argument("--tol-primal", type=float)
    solve.add_argument("--tol-dual", type=float)
    solve.add_argument("--tol-gap", type=float)
    solve.add_argument("--max-iters", type=int)
    solve.add_argument("--max-seconds", type=float)
    solve.add_argument("--trace-stride", type=int)
    solve.add_argument("--check-every", type=int)
    solve.add_argument("--trace", type=Path, help="Trace CSV destination")
    solve.add_argument("--no-timing", action="store_true", help="Leave wall_ms empty in the trace")
    solve.add_argument("--reference", type=Path, help="Stop when the reference solution is beaten")
    solve.add_argument("--out", "-o", type=Path, help="Solution JSON destination")
    solve.add_argument("--scaling-file", type=Path, help='Fixed column scaling {"o": [...]}')
    solve.add_argument("--warm-start", type=Path, help="Solution file to start from")

    gen = sub.add_parser("generate", parents=[common], help="Write a random instance")
    gen.add_argument("--family", "-f", choices=[f.value for f in ProblemFamily], required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, help="Rows; defaults to floor(0.8 n)")
    gen.add_argument("--h", type=int, default=4, help="Lorentz block size for socp")
    gen.add_argument("--seed", "-s", type=int, default=0)
    gen.add_argument("--out", "-o", type=Path, required=True)
    gen.add_argument("--sparse", action="store_true", help="Store A as triplets")

    bench = sub.add_parser("bench", parents=[common], help="Run a benchmark matrix")
    bench.add_argument("--spec", type=Path, required=True)
    bench.add_argument("--out", "-o", type=Path, required=True, help="Summary CSV destination")
    bench.add_argument("--workers", type=int, help="Override the spec's worker count")

    compare = sub.add_parser("compare", parents=[common], help="Compare solutions of one problem")
    compare.add_argument("--problem", "-p", type=Path, required=True)
    compare.add_argument("solutions", type=Path, nargs="+")
    compare.add_argument("--cone-tol", type=float, default=1e-12)
    return ap


def solve_options(settings: AppSettings, args: argparse.Namespace) -> SolveOptions:
    return settings.solver.to_options(
        mu=args.mu,
        max_iters=args.max_iters,
        max_seconds=args.max_seconds,
        trace_stride=args.trace_stride,
        check_every=args.check_every,
        tol_primal=args.tol_primal if args.tol_primal is not None else args.tol,
        tol_dual=args.tol_dual if args.tol_dual is not None else args.tol,
        tol_gap=args.tol_gap if args.tol_gap is not None else args.tol,
        initial="warm" if args.warm_start is not None else None,
    )


def _report_dict(report) -> Optional[Dict[str, Any]]:
    return None if report is None else {**report.to_dict(), "combined": report.combined}


def cmd_solve(args: argparse.Namespace, container: Container, settings: AppSettings) -> int:
    config = RunConfig(
        problem_path=args.problem,
        algorithm=Algorithm(args.algorithm),
        preconditioner=PreconditionerKind(args.precondition),
        condition=Schedule.parse(args.condition) if args.condition is not None else None,
        t=args.t,
        options=solve_options(settings, args),
        reference_path=args.reference,
        trace_path=args.trace,
        solution_out=args.out,
        scaling_path=args.scaling_file,
        warm_start_path=args.warm_start,
        threads=args.threads,
        timing=not args.no_timing,
    )
    response = container.resolve(SolveProblemUseCase).execute(config)
    summary = {
        "status": response.status.value,
        "iterations": response.iterations,
        "wall_ms": round(response.wall_ms, 3),
        "conditioning_events": response.conditioning_events,
        "residuals": _report_dict(response.report),
    }
    if response.message:
        summary["message"] = response.message
    if response.error_type:
        summary["error_type"] = response.error_type
    print(json.dumps(summary, indent=2))
    return response.exit_code


def cmd_generate(args: argparse.Namespace, container: Container, settings: AppSettings) -> int:
    spec = GenSpec(family=ProblemFamily(args.family), n=args.n, seed=args.seed, m=args.m, h=args.h)
    response = container.resolve(GenerateProblemUseCase).execute(
        GenerateRequest(spec=spec, out=args.out, sparse=args.sparse)
    )
    print(f"wrote {response.path} (m={response.m}, n={response.n}, blocks={response.cone_blocks})")
    return EXIT_CONVERGED


def cmd_bench(args: argparse.Namespace, container: Container, settings: AppSettings) -> int:
    request = load_bench_request(args.spec, settings.solver.to_options())
    if args.workers is not None:
        if args.workers < 1:
            raise ValidationError("--workers must be >= 1")
        request.workers = args.workers
    response = container.resolve(RunBenchmarkUseCase).execute(request, out=args.out, threads=args.threads)
    print(f"{len(response.rows)} runs, {response.failures} failed, summary in {response.summary_path}")
    return EXIT_CONVERGED


def cmd_compare(args: argparse.Namespace, container: Container, settings: AppSettings) -> int:
    response = container.resolve(CompareSolutionsUseCase).execute(
        CompareRequest(problem_path=args.problem, solution_paths=list(args.solutions),
                       cone_tolerance=args.cone_tol)
    )
    header = f"{'':2}{'solution':<32}{'primal_res':>13}{'dual_res':>13}{'gap':>13}" \
             f"{'cone_x':>13}{'cone_z':>13}{'primal_obj':>16}"
    print(header)
    for index, entry in enumerate(response.entries):
        r = entry.report
        mark = "*" if index == response.dominant else ("!" if entry.outside_cone else " ")
        print(f"{mark:2}{entry.path:<32}{r.primal_res:>13.3e}{r.dual_res:>13.3e}{r.gap:>13.3e}"
              f"{r.cone_dist_x:>13.3e}{r.cone_dist_z:>13.3e}{r.primal_obj:>16.8g}")
    if response.tie:
        print("tie: no solution strictly beats all others on primal residual and gap")
    else:
        print(f"dominant: {response.entries[response.dominant].path}")
    if any(entry.outside_cone for entry in response.entries):
        print("!: iterate lies outside the cone")
    return EXIT_CONVERGED


COMMANDS = {
    "solve": cmd_solve,
    "generate": cmd_generate,
    "bench": cmd_bench,
    "compare": cmd_compare,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except SettingsError as e:
        print(f"invalid CONIC_SPLIT_* environment: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT

    log_cfg = settings.logging
    setup_structured_logging(
        log_level=args.log_level or log_cfg.level,
        use_json=args.json_logs if args.json_logs is not None else log_cfg.use_json,
        log_file=args.log_file or log_cfg.log_file,
    )
    set_run_context(run_id=uuid.uuid4().hex[:12])
    container = initialize_container()
    try:
        return COMMANDS[args.command](args, container, settings)
    except DomainError as e:
        logger.error("Command failed", extra={"command": args.command, "error_type": e.code, "error": str(e)})
        container.resolve(SolverMetrics).track_failure(e.code)
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(SolveStatus.FAILED, factorization=isinstance(e, FactorizationError))
    finally:
        if args.metrics_out is not None:
            try:
                container.resolve(SolverMetrics).export(args.metrics_out)
            except OSError as e:
                logger.error("Metrics export failed", extra={"path": str(args.metrics_out), "error": str(e)})
        clear_run_context()


if __name__ == "__main__":
    sys.exit(main())
