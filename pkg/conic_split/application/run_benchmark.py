"""
Run Benchmark Use Case

Runs every solver configuration on every cell of a benchmark matrix and
writes one summary row per (cell, config). A failing cell is recorded and
the run continues.
"""
import contextvars
import dataclasses
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Union

import numpy as np

from conic_split.domain.entities import ConicProgram
from conic_split.domain.errors import DomainError, ValidationError
from conic_split.domain.generators import example_iii, generate
from conic_split.domain.ports import IProblemRepository, ISummaryWriter, ITraceWriter
from conic_split.domain.value_objects import SolveStatus
from conic_split.infrastructure.threads import resolve_threads, thread_limit
from conic_split.observability.logger import cell_var

from .dto import BenchCell, BenchConfigEntry, BenchRequest, BenchResponse, BenchRow
from .solve_problem import SolveProblemUseCase, resolve_policy, save_trace

logger = logging.getLogger(__name__)

PUBLISHED_SCALING = "published"

_UNSAFE = re.compile(r"[^A-Za-z0-9._-]+")


def trace_name(cell: BenchCell, config: BenchConfigEntry) -> str:
    return f"{_UNSAFE.sub('_', cell.label).strip('_')}__{_UNSAFE.sub('_', config.name)}.csv"


class RunBenchmarkUseCase:
    """
    Use case for the benchmark harness.

    Cells are materialized once and shared read-only between configs, so
    parallel workers never share mutable state.
    """

    def __init__(
        self,
        solve_use_case: SolveProblemUseCase,
        problem_repository: IProblemRepository,
        trace_writer: ITraceWriter,
        summary_writer: ISummaryWriter,
    ):
        self.solver = solve_use_case
        self.problem_repo = problem_repository
        self.trace_writer = trace_writer
        self.summary_writer = summary_writer

    def execute(self, request: BenchRequest, out: Optional[Path] = None,
                threads: Optional[int] = None) -> BenchResponse:
        """
        Execute the benchmark matrix.

        Args:
            request: Cells, configs and shared options
            out: Summary CSV destination; None skips writing
            threads: Native thread cap (CONIC_SPLIT_THREADS wins)

        Returns:
            Rows in (cell, config) order regardless of worker count
        """
        jobs = [(cell, config) for cell in request.cells for config in request.configs]
        logger.info("Starting benchmark", extra={"cells": len(request.cells), "configs": len(request.configs),
                                                 "runs": len(jobs), "workers": request.workers})

        programs = {cell: self._materialize(cell, request.base_dir) for cell in request.cells}

        with thread_limit(resolve_threads(threads)):
            if request.workers == 1 or len(jobs) <= 1:
                rows = [self._run_one(cell, config, programs[cell], request) for cell, config in jobs]
            else:
                # jobs run in copies of the caller's context
                contexts = [contextvars.copy_context() for _ in jobs]
                with ThreadPoolExecutor(max_workers=request.workers) as pool:
                    rows = list(pool.map(
                        lambda ctx, job: ctx.run(self._run_one, job[0], job[1], programs[job[0]], request),
                        contexts, jobs,
                    ))

        response = BenchResponse(rows=rows)
        if out is not None:
            response.summary_path = self.summary_writer.write([row.to_dict() for row in rows], out)
        logger.info("Benchmark finished", extra={"runs": len(rows), "failures": response.failures})
        return response

    def _materialize(self, cell: BenchCell, base_dir: Path) -> Union[ConicProgram, DomainError]:
        try:
            if cell.family == "example-iii":
                return example_iii().program
            if cell.family.startswith("file:"):
                return self.problem_repo.load(base_dir / cell.family[len("file:"):])
            return generate(cell.gen_spec())
        except DomainError as e:
            logger.error("Cell could not be built", extra={"cell": cell.label, "error_type": e.code,
                                                           "error": str(e)})
            return e

    def _fixed_scaling(self, cell: BenchCell, config: BenchConfigEntry,
                       base_dir: Path) -> Optional[np.ndarray]:
        if config.fixed_scaling is None:
            return None
        if config.fixed_scaling == PUBLISHED_SCALING:
            if cell.family != "example-iii":
                raise ValidationError("the published scaling exists only for example-iii")
            return example_iii().E_AC
        return self.problem_repo.load_scaling(base_dir / config.fixed_scaling)

    def _run_one(self, cell: BenchCell, config: BenchConfigEntry,
                 program: Union[ConicProgram, DomainError], request: BenchRequest) -> BenchRow:
        token = cell_var.set(f"{cell.label}/{config.name}")
        row = BenchRow(
            cell=cell.label,
            family=cell.family,
            n=cell.n,
            seed=None if cell.family == "example-iii" or cell.family.startswith("file:") else cell.seed,
            config=config.name,
            algorithm=config.algorithm.value,
            precondition=config.preconditioner.value,
            condition=str(config.condition) if config.condition is not None else "",
            status=SolveStatus.FAILED.value,
        )
        try:
            if isinstance(program, DomainError):
                raise program
            if row.n is None:
                row.n = program.n
            options = request.options
            if config.mu is not None:
                options = dataclasses.replace(options, mu=config.mu)
            fixed_o = self._fixed_scaling(cell, config, request.base_dir)
            policy = resolve_policy(config.preconditioner, config.condition, config.t, fixed_o is not None,
                                    program.cones.is_orthant, self.solver.conditioning_config)
            if policy is not None:
                row.condition = str(policy.schedule)

            outcome, prepared = self.solver.solve_program(program, config.algorithm, config.preconditioner,
                                                          options, policy=policy, fixed_o=fixed_o)
            row.status = outcome.status.value
            row.iterations = outcome.iterations
            row.wall_ms = outcome.wall_ms if request.timing else None
            if outcome.report is not None:
                row.primal_res = outcome.report.primal_res
                row.dual_res = outcome.report.dual_res
                row.gap = outcome.report.gap
                row.combined = outcome.report.combined
            if outcome.status is SolveStatus.DIVERGED:
                row.failed = "Diverged"
            if request.trace_dir is not None:
                save_trace(self.trace_writer, outcome, prepared, request.trace_dir / trace_name(cell, config),
                           config.algorithm, config.preconditioner, options, timing=request.timing)
        except DomainError as e:
            row.failed = e.code
            self.solver.metrics.track_failure(e.code)
            logger.warning("Bench run failed", extra={"cell": cell.label, "config": config.name,
                                                      "error_type": e.code, "error": str(e)})
        finally:
            cell_var.reset(token)
        return row

