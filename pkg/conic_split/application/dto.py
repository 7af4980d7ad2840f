"""
Data Transfer Objects (DTOs) for the application layer.

DTOs decouple the domain model from the command line and the file formats.
They define the contract for data exchange between layers.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from conic_split.domain.entities import ResidualReport, Solution, TraceRecord
from conic_split.domain.errors import ValidationError
from conic_split.domain.value_objects import (
    Algorithm, GenSpec, PreconditionerKind, ProblemFamily, Schedule, SolveOptions, SolveStatus,
)

EXIT_CONVERGED = 0
EXIT_BAD_INPUT = 1
EXIT_NOT_CONVERGED = 2
EXIT_DIVERGED = 3
EXIT_FACTORIZATION = 4


def check_conditioning(algorithm: Algorithm, preconditioner: PreconditionerKind,
                       condition: Optional[Schedule], fixed_scaling: bool) -> None:
    """
    Reject combinations the methods cannot run.

    Adaptive events are defined on the splitting iteration only; a fixed
    scaling is a static column preconditioner and works with every method.

    Raises:
        ValidationError: If the combination is invalid
    """
    if condition is not None and condition.enabled and preconditioner is not PreconditionerKind.ADAPTIVE:
        raise ValidationError("a conditioning schedule requires precondition=adaptive")
    if fixed_scaling and preconditioner is PreconditionerKind.SINKHORN:
        raise ValidationError("a fixed scaling cannot be combined with sinkhorn")
    if preconditioner is PreconditionerKind.ADAPTIVE and algorithm is not Algorithm.SPLIT:
        fixed_only = fixed_scaling and (condition is None or not condition.enabled)
        if not fixed_only:
            raise ValidationError(f"adaptive conditioning is only defined for algorithm=split, not {algorithm.value}")


def exit_code_for(status: SolveStatus, factorization: bool = False) -> int:
    """0 converged | 1 bad input | 2 budget exhausted | 3 diverged | 4 factorization."""
    if status is SolveStatus.CONVERGED:
        return EXIT_CONVERGED
    if status in (SolveStatus.MAX_ITERS, SolveStatus.TIME_LIMIT):
        return EXIT_NOT_CONVERGED
    if status is SolveStatus.DIVERGED:
        return EXIT_DIVERGED
    return EXIT_FACTORIZATION if factorization else EXIT_BAD_INPUT


# ============================================================================
# Solve DTOs
# ============================================================================

@dataclass
class RunConfig:
    """
    Request to solve one problem file.

    Attributes:
        problem_path: Problem JSON file
        algorithm: Iterative method
        preconditioner: none, sinkhorn or adaptive
        condition: Explicit schedule; None means the preset for the cone type
        t: Explicit compression parameter; None means the preset
        options: Iteration options
        reference_path: Reference solution; switches to beat-the-reference stopping
        trace_path: Trace CSV destination
        solution_out: Solution JSON destination
        scaling_path: Fixed column scaling {"o": [...]}
        warm_start_path: Solution file whose (x, z) starts the iteration
        threads: Native thread cap (CONIC_SPLIT_THREADS wins)
        timing: Record wall times in the trace
    """
    problem_path: Path
    algorithm: Algorithm = Algorithm.SPLIT
    preconditioner: PreconditionerKind = PreconditionerKind.NONE
    condition: Optional[Schedule] = None
    t: Optional[float] = None
    options: SolveOptions = field(default_factory=SolveOptions)
    reference_path: Optional[Path] = None
    trace_path: Optional[Path] = None
    solution_out: Optional[Path] = None
    scaling_path: Optional[Path] = None
    warm_start_path: Optional[Path] = None
    threads: Optional[int] = None
    timing: bool = True

    def __post_init__(self):
        if self.t is not None and self.t <= 0:
            raise ValidationError("t must be positive")
        if self.warm_start_path is None and self.options.initial == "warm":
            raise ValidationError("initial=warm needs a warm start file")
        check_conditioning(self.algorithm, self.preconditioner, self.condition,
                           self.scaling_path is not None)


@dataclass
class RunResponse:
    """
    Result of a solve.

    Attributes:
        status: Final solver status
        exit_code: Process exit code for the status
        iterations: Iterations taken
        wall_ms: Wall time of the iteration loop
        report: Residuals of the returned iterate
        solution: The returned iterate with y recovered
        conditioning_events: Adaptive events that fired
        message: Why the solve stopped without converging
        error_type: DomainError code when the solve failed, or the error matching a
            budget or divergence stop (MaxItersReached, Diverged)
    """
    status: SolveStatus
    exit_code: int
    iterations: int = 0
    wall_ms: float = 0.0
    report: Optional[ResidualReport] = None
    solution: Optional[Solution] = None
    conditioning_events: int = 0
    message: Optional[str] = None
    error_type: Optional[str] = None
    trace: List[TraceRecord] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.status is SolveStatus.CONVERGED


# ============================================================================
# Benchmark DTOs
# ============================================================================

@dataclass(frozen=True)
class BenchCell:
    """One problem instance of the benchmark matrix."""
    family: str
    n: Optional[int] = None
    m: Optional[int] = None
    h: int = 4
    seed: int = 0

    @property
    def label(self) -> str:
        if self.family == "example-iii" or self.family.startswith("file:"):
            return self.family
        return f"{self.family}-n{self.n}-s{self.seed}"

    def gen_spec(self) -> GenSpec:
        return GenSpec(family=ProblemFamily(self.family), n=self.n, seed=self.seed, m=self.m, h=self.h)


@dataclass(frozen=True)
class BenchConfigEntry:
    """One solver configuration of the benchmark matrix."""
    name: str
    algorithm: Algorithm = Algorithm.SPLIT
    preconditioner: PreconditionerKind = PreconditionerKind.NONE
    condition: Optional[Schedule] = None
    t: Optional[float] = None
    mu: Optional[float] = None
    fixed_scaling: Optional[str] = None

    def __post_init__(self):
        check_conditioning(self.algorithm, self.preconditioner, self.condition,
                           self.fixed_scaling is not None)


@dataclass
class BenchRequest:
    """
    Request to run every config on every cell.

    Attributes:
        cells: Expanded instance list
        configs: Solver configurations
        options: Iteration options shared by all runs (mu may be overridden per config)
        trace_dir: Directory for per-run traces; None writes no traces
        workers: Parallel solves
        timing: Record wall times (off keeps output byte-identical across reruns)
        base_dir: Directory that relative file: cells and scaling paths resolve against
    """
    cells: List[BenchCell] = field(default_factory=list)
    configs: List[BenchConfigEntry] = field(default_factory=list)
    options: SolveOptions = field(default_factory=SolveOptions)
    trace_dir: Optional[Path] = None
    workers: int = 1
    timing: bool = False
    base_dir: Path = field(default_factory=Path)

    def __post_init__(self):
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        names = [config.name for config in self.configs]
        if len(set(names)) != len(names):
            raise ValidationError("bench config names must be unique")


@dataclass
class BenchRow:
    """One summary row: a (cell, config) run."""
    cell: str
    family: str
    n: Optional[int]
    seed: Optional[int]
    config: str
    algorithm: str
    precondition: str
    condition: str
    status: str
    iterations: int = 0
    wall_ms: Optional[float] = None
    primal_res: Optional[float] = None
    dual_res: Optional[float] = None
    gap: Optional[float] = None
    combined: Optional[float] = None
    failed: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


@dataclass
class BenchResponse:
    rows: List[BenchRow] = field(default_factory=list)
    summary_path: Optional[Path] = None

    @property
    def failures(self) -> int:
        return sum(1 for row in self.rows if row.failed)


# ============================================================================
# Compare DTOs
# ============================================================================

@dataclass
class CompareRequest:
    """
    Request to tabulate residuals of several solutions of one problem.

    Attributes:
        problem_path: Problem JSON file
        solution_paths: At least two solution files
        cone_tolerance: Relative cone distance above which a solution is flagged
    """
    problem_path: Path
    solution_paths: List[Path]
    cone_tolerance: float = 1e-12

    def __post_init__(self):
        if len(self.solution_paths) < 2:
            raise ValidationError("compare needs at least two solution files")


@dataclass
class CompareEntry:
    path: str
    report: ResidualReport
    outside_cone: bool = False


@dataclass
class CompareResponse:
    """Reports per solution and the index of the strictly dominant one (None on a tie)."""
    entries: List[CompareEntry] = field(default_factory=list)
    dominant: Optional[int] = None

    @property
    def tie(self) -> bool:
        return self.dominant is None


# ============================================================================
# Generate DTOs
# ============================================================================

@dataclass
class GenerateRequest:
    spec: GenSpec
    out: Path
    sparse: bool = False


@dataclass
class GenerateResponse:
    path: Path
    m: int
    n: int
    cone_blocks: int
