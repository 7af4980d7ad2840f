"""
Solve Problem Use Case

Orchestrates one solve:
1. Load the problem (and the reference, scaling and warm start if given)
2. Validate it and factorize A
3. Apply Sinkhorn or fixed column scaling when requested
4. Drive the chosen method to termination
5. Persist the trace and solution, and record metrics
"""
import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from conic_split import __version__
from conic_split.domain.baselines import AdmmSolver, DouglasRachfordSolver
from conic_split.domain.conditioning import Preconditioning, check_equilibration, sinkhorn_knopp
from conic_split.domain.cones import ConeOps
from conic_split.domain.driver import Driver, IterativeMethod
from conic_split.domain.entities import ConicProgram, SolveOutcome
from conic_split.domain.errors import (
    BadReferenceFile, Diverged, DomainError, FactorizationError, MaxItersReached, ValidationError,
)
from conic_split.domain.generators import published_sinkhorn_cond
from conic_split.domain.ports import IProblemRepository, ISolutionRepository, ITraceWriter
from conic_split.domain.residuals import ResidualEvaluator, validate
from conic_split.domain.splitting import SplittingSolver
from conic_split.domain.stopping import InternalCriteria, ReferenceCriteria, StoppingCriteria
from conic_split.domain.subspace import SubspaceProjector
from conic_split.domain.value_objects import (
    Algorithm, ConditioningPolicy, PreconditionerKind, Schedule, SolveOptions, SolveStatus,
)
from conic_split.infrastructure.config import ConditioningConfig, SinkhornConfig, SubspaceConfig
from conic_split.infrastructure.threads import resolve_threads, thread_limit
from conic_split.observability.metrics import SolverMetrics

from .dto import RunConfig, RunResponse, exit_code_for

logger = logging.getLogger(__name__)

COMBINED_RESIDUAL = "max(primal_res, dual_res, gap)"

# statuses that end without convergence and are reported as the matching error
STATUS_ERRORS = {
    SolveStatus.MAX_ITERS: MaxItersReached.code,
    SolveStatus.DIVERGED: Diverged.code,
}


def resolve_policy(preconditioner: PreconditionerKind, condition: Optional[Schedule],
                   t: Optional[float], fixed_scaling: bool, orthant: bool,
                   conditioning: ConditioningConfig) -> Optional[ConditioningPolicy]:
    """
    Conditioning policy for a run, or None when no adaptive event can fire.

    Explicit schedule and t override the preset for the cone type; with a
    fixed scaling the preset schedule is not applied.
    """
    if preconditioner is not PreconditionerKind.ADAPTIVE:
        return None
    if fixed_scaling and condition is None:
        return None
    preset = conditioning.preset(orthant)
    schedule = condition if condition is not None else preset.schedule
    if not schedule.enabled:
        return None
    return dataclasses.replace(preset, schedule=schedule, t=t if t is not None else preset.t)


@dataclass
class PreparedSolve:
    """A method wired to its driver, plus what the trace metadata needs."""
    method: IterativeMethod
    driver: Driver
    preconditioning: Optional[Preconditioning]
    policy: Optional[ConditioningPolicy]
    initialization: str
    x0: Optional[np.ndarray] = None
    z0: Optional[np.ndarray] = None

    @property
    def conditioning_events(self) -> int:
        conditioner = getattr(self.method, "conditioner", None)
        return conditioner.events if conditioner is not None else 0

    def run(self) -> SolveOutcome:
        return self.driver.run(self.method, self.x0, self.z0)


class SolveProblemUseCase:
    """
    Use case for solving one conic program.

    The numerical work is delegated to the domain; this class decides which
    method and preconditioner to build and handles all I/O through ports.
    """

    def __init__(
        self,
        problem_repository: IProblemRepository,
        solution_repository: ISolutionRepository,
        trace_writer: ITraceWriter,
        metrics: SolverMetrics,
        conditioning_config: ConditioningConfig,
        sinkhorn_config: SinkhornConfig,
        subspace_config: SubspaceConfig,
    ):
        self.problem_repo = problem_repository
        self.solution_repo = solution_repository
        self.trace_writer = trace_writer
        self.metrics = metrics
        self.conditioning_config = conditioning_config
        self.sinkhorn_config = sinkhorn_config
        self.subspace_config = subspace_config

    def execute(self, config: RunConfig) -> RunResponse:
        """
        Execute a solve described by a RunConfig.

        Args:
            config: Paths, method and options of the run

        Returns:
            Response with status, exit code, residuals and solution. Domain
            failures are reported in the response, never raised.
        """
        try:
            program = self.problem_repo.load(config.problem_path)
            criteria = self._criteria(program, config)
            fixed_o = self.problem_repo.load_scaling(config.scaling_path) if config.scaling_path else None
            warm = None
            if config.warm_start_path is not None:
                start = self.solution_repo.load(config.warm_start_path)
                warm = (np.asarray(start.x), np.asarray(start.z))
            policy = resolve_policy(config.preconditioner, config.condition, config.t,
                                    fixed_o is not None, program.cones.is_orthant, self.conditioning_config)

            logger.info(
                "Starting solve",
                extra={
                    "problem": str(config.problem_path),
                    "algorithm": config.algorithm.value,
                    "precondition": config.preconditioner.value,
                    "schedule": str(policy.schedule) if policy else "none",
                    "m": program.m,
                    "n": program.n,
                },
            )
            with thread_limit(resolve_threads(config.threads)):
                prepared = self.prepare(program, config.algorithm, config.preconditioner, config.options,
                                        policy=policy, fixed_o=fixed_o, criteria=criteria, warm=warm)
                outcome = prepared.run()

            if config.trace_path is not None:
                save_trace(self.trace_writer, outcome, prepared, config.trace_path, config.algorithm,
                           config.preconditioner, config.options, timing=config.timing)
            if config.solution_out is not None and outcome.solution is not None:
                self.solution_repo.save(outcome.solution, config.solution_out)

            self.record(config.algorithm, outcome, prepared.conditioning_events)
            return RunResponse(
                status=outcome.status,
                exit_code=exit_code_for(outcome.status),
                iterations=outcome.iterations,
                wall_ms=outcome.wall_ms,
                report=outcome.report,
                solution=outcome.solution,
                conditioning_events=prepared.conditioning_events,
                message=outcome.message,
                error_type=STATUS_ERRORS.get(outcome.status),
                trace=outcome.trace,
            )

        except DomainError as e:
            factorization = isinstance(e, FactorizationError)
            logger.error("Solve failed", extra={"error_type": e.code, "error": str(e),
                                                "problem": str(config.problem_path)})
            self.metrics.track_failure(e.code)
            return RunResponse(
                status=SolveStatus.FAILED,
                exit_code=exit_code_for(SolveStatus.FAILED, factorization=factorization),
                message=str(e),
                error_type=e.code,
            )

    def _criteria(self, program: ConicProgram, config: RunConfig) -> StoppingCriteria:
        if config.reference_path is None:
            return InternalCriteria(config.options)
        x_ref, y_ref = self.solution_repo.load_reference(config.reference_path)
        if x_ref.shape != (program.n,) or y_ref.shape != (program.m,):
            raise BadReferenceFile(
                f"{config.reference_path}: expected x of length {program.n} and y of length {program.m}"
            )
        criteria = ReferenceCriteria.from_reference(program, x_ref, y_ref)
        logger.info("Reference stopping", extra={"primal_bound": criteria.primal_bound,
                                                 "gap_bound": criteria.gap_bound})
        return criteria

    # ------------------------------------------------------------------
    # Wiring
    # ------------------------------------------------------------------

    def prepare(
        self,
        program: ConicProgram,
        algorithm: Algorithm,
        preconditioner: PreconditionerKind,
        options: SolveOptions,
        policy: Optional[ConditioningPolicy] = None,
        fixed_o: Optional[np.ndarray] = None,
        criteria: Optional[StoppingCriteria] = None,
        warm: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ) -> PreparedSolve:
        """
        Validate the program and build the method, driver and preconditioner.

        Residuals are always evaluated on `program` itself; when the method
        runs on a preconditioned copy its iterates are mapped back first.

        Raises:
            ValidationError: Invalid program, scaling or warm start
            FactorizationError: A is numerically rank deficient
        """
        validate(program)
        rank_tol = self.subspace_config.rank_tol
        evaluator = ResidualEvaluator(program, SubspaceProjector.build(program.A, rank_tol))

        preconditioning = self.preconditioning_for(program, preconditioner, fixed_o)
        if preconditioning is not None:
            work = preconditioning.apply(program)
            projector = SubspaceProjector.build(work.A, rank_tol)

            def recover(x_hat: np.ndarray, z_hat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
                x, z, _ = preconditioning.recover(x_hat, z_hat)
                return x, z
        else:
            work, projector, recover = program, evaluator.projector, None

        x0 = z0 = None
        if warm is not None:
            x0, z0 = (np.asarray(v, dtype=np.float64).reshape(-1) for v in warm)
            if x0.shape != (program.n,) or z0.shape != (program.n,):
                raise ValidationError(f"warm start must have length {program.n}")
            if preconditioning is not None:
                x0, z0 = x0 / preconditioning.E, z0 * preconditioning.E

        method = self.build_method(work, algorithm, options, policy, projector)
        driver = Driver(evaluator, criteria or InternalCriteria(options), options, recover=recover)

        if warm is not None:
            initialization = "warm"
        elif policy is not None and algorithm is Algorithm.SPLIT:
            initialization = "cone-identity"
        else:
            initialization = "zero"
        return PreparedSolve(method=method, driver=driver, preconditioning=preconditioning,
                             policy=policy, initialization=initialization, x0=x0, z0=z0)

    def preconditioning_for(self, program: ConicProgram, preconditioner: PreconditionerKind,
                            fixed_o: Optional[np.ndarray]) -> Optional[Preconditioning]:
        if fixed_o is not None:
            if fixed_o.shape != (program.n,):
                raise ValidationError(f"scaling must have length {program.n}, got {fixed_o.shape[0]}")
            return Preconditioning.columns(program.m, fixed_o)
        if preconditioner is not PreconditionerKind.SINKHORN:
            return None

        cfg = self.sinkhorn_config
        D, E = sinkhorn_knopp(program.A, iters=cfg.iterations, damping=cfg.damping, tol=cfg.tolerance)
        # E has to be constant on each Lorentz block to keep the cone invariant
        E = ConeOps(program.cones).block_geometric_mean(E)
        check_equilibration(program.A, D, E, published_cond=published_sinkhorn_cond(program))
        return Preconditioning(D, E)

    @staticmethod
    def build_method(program: ConicProgram, algorithm: Algorithm, options: SolveOptions,
                     policy: Optional[ConditioningPolicy],
                     projector: SubspaceProjector) -> IterativeMethod:
        if algorithm is Algorithm.SPLIT:
            return SplittingSolver(program, options, policy=policy, projector=projector)
        if policy is not None:
            raise ValidationError(f"adaptive conditioning is only defined for algorithm=split, not {algorithm.value}")
        if algorithm is Algorithm.DR:
            return DouglasRachfordSolver(program, options, projector=projector)
        return AdmmSolver(program, options, projector=projector)

    # ------------------------------------------------------------------
    # Reporting
    # ------------------------------------------------------------------

    @staticmethod
    def trace_metadata(prepared: PreparedSolve, algorithm: Algorithm, preconditioner: PreconditionerKind,
                       options: SolveOptions) -> Dict[str, Any]:
        policy = prepared.policy
        return {
            "version": __version__,
            "algorithm": algorithm.value,
            "precondition": preconditioner.value,
            "fixed_scaling": prepared.preconditioning is not None and preconditioner is not PreconditionerKind.SINKHORN,
            "mu": options.mu,
            "schedule": str(policy.schedule) if policy else "none",
            "t": policy.t if policy else None,
            "initialization": prepared.initialization,
            "combined_residual": COMBINED_RESIDUAL,
            "criteria": prepared.driver.criteria.describe(),
            "trace_stride": options.trace_stride,
            "check_every": options.check_every,
            "conditioning_events": prepared.conditioning_events,
        }

    def record(self, algorithm: Algorithm, outcome: SolveOutcome, events: int) -> None:
        self.metrics.track_solve(algorithm.value, outcome.status.value, outcome.iterations,
                                 outcome.wall_ms / 1000.0)
        self.metrics.track_conditioning(events)
        extra = {
            "algorithm": algorithm.value,
            "status": outcome.status.value,
            "iterations": outcome.iterations,
            "wall_ms": round(outcome.wall_ms, 3),
        }
        if outcome.report is not None:
            extra.update(primal_res=outcome.report.primal_res, dual_res=outcome.report.dual_res,
                         gap=outcome.report.gap)
        if outcome.converged:
            logger.info("Solve converged", extra=extra)
        else:
            logger.warning("Solve stopped without converging", extra={**extra, "reason": outcome.message})

    def solve_program(
        self,
        program: ConicProgram,
        algorithm: Algorithm = Algorithm.SPLIT,
        preconditioner: PreconditionerKind = PreconditionerKind.NONE,
        options: Optional[SolveOptions] = None,
        policy: Optional[ConditioningPolicy] = None,
        fixed_o: Optional[np.ndarray] = None,
        criteria: Optional[StoppingCriteria] = None,
        warm: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ) -> Tuple[SolveOutcome, PreparedSolve]:
        """
        Solve an in-memory program; used by the benchmark and the tests.

        Raises:
            DomainError: Validation and factorization failures propagate
        """
        options = options or SolveOptions()
        prepared = self.prepare(program, algorithm, preconditioner, options, policy=policy,
                                fixed_o=fixed_o, criteria=criteria, warm=warm)
        outcome = prepared.run()
        self.record(algorithm, outcome, prepared.conditioning_events)
        return outcome, prepared


def save_trace(writer: ITraceWriter, outcome: SolveOutcome, prepared: PreparedSolve, path: Path,
               algorithm: Algorithm, preconditioner: PreconditionerKind, options: SolveOptions,
               timing: bool = True) -> Path:
    """Write a trace with the standard metadata, dropping wall times when timing is off."""
    records = outcome.trace if timing else [dataclasses.replace(r, wall_ms=None) for r in outcome.trace]
    metadata = SolveProblemUseCase.trace_metadata(prepared, algorithm, preconditioner, options)
    return writer.write(records, path, metadata)
