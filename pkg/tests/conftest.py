"""Test configuration & shared fixtures.

Small programs with hand-checked optima, repositories writing into the
per-test tmp_path, and a use case wired with a private metrics registry so
tests never share counters.
"""
import json
import os

import hypothesis
import numpy as np
import pytest

from conic_split.adapters.outbound.persistence import (
    CsvSummaryWriter, CsvTraceWriter, JsonProblemRepository, JsonSolutionRepository,
)
from conic_split.application import (
    CompareSolutionsUseCase, GenerateProblemUseCase, RunBenchmarkUseCase, SolveProblemUseCase,
)
from conic_split.domain.entities import ConicProgram
from conic_split.domain.generators import example_iii
from conic_split.domain.value_objects import ConeSpec
from conic_split.infrastructure.config import (
    ConditioningConfig, SinkhornConfig, SubspaceConfig, get_settings,
)
from conic_split.infrastructure.container import reset_container
from conic_split.observability.logger import clear_run_context
from conic_split.observability.metrics import SolverMetrics

np.seterr(all="warn")

hypothesis.settings.register_profile("ci", deadline=None, max_examples=200)
hypothesis.settings.register_profile("dev", deadline=None, max_examples=25)
hypothesis.settings.register_profile("debugger", deadline=None, report_multiple_bugs=False)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Settings are cached per process; every test sees its own environment."""
    for name in list(os.environ):
        if name.startswith("CONIC_SPLIT_"):
            monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
    clear_run_context()


@pytest.fixture
def fresh_container():
    container = reset_container()
    yield container
    reset_container()


# ============================================================================
# Programs
# ============================================================================

@pytest.fixture
def tiny_lp() -> ConicProgram:
    """min x₁ s.t. x₁ + x₂ = 1, x ≥ 0; optimum x = [0, 1], z = [1, 0], y = 0."""
    return ConicProgram(A=[[1.0, 1.0]], b=[1.0], c=[1.0, 0.0], cones=ConeSpec.nonneg(2))


@pytest.fixture
def tiny_socp() -> ConicProgram:
    """min x₁ s.t. x₂ = 1, x ∈ K₃; optimum x = (1, 1, 0), y = 1, z = (1, −1, 0)."""
    return ConicProgram(A=[[0.0, 1.0, 0.0]], b=[1.0], c=[1.0, 0.0, 0.0], cones=ConeSpec.lorentz(3, 1))


@pytest.fixture
def example():
    return example_iii()


# ============================================================================
# Adapters and use cases
# ============================================================================

@pytest.fixture
def problem_repo():
    return JsonProblemRepository()


@pytest.fixture
def solution_repo():
    return JsonSolutionRepository()


@pytest.fixture
def metrics():
    return SolverMetrics()


@pytest.fixture
def solve_use_case(problem_repo, solution_repo, metrics):
    return SolveProblemUseCase(
        problem_repository=problem_repo,
        solution_repository=solution_repo,
        trace_writer=CsvTraceWriter(),
        metrics=metrics,
        conditioning_config=ConditioningConfig(),
        sinkhorn_config=SinkhornConfig(),
        subspace_config=SubspaceConfig(),
    )


@pytest.fixture
def bench_use_case(solve_use_case, problem_repo):
    return RunBenchmarkUseCase(
        solve_use_case=solve_use_case,
        problem_repository=problem_repo,
        trace_writer=CsvTraceWriter(),
        summary_writer=CsvSummaryWriter(),
    )


@pytest.fixture
def compare_use_case(problem_repo, solution_repo):
    return CompareSolutionsUseCase(problem_repository=problem_repo, solution_repository=solution_repo)


@pytest.fixture
def generate_use_case(problem_repo):
    return GenerateProblemUseCase(problem_repository=problem_repo)


# ============================================================================
# Files
# ============================================================================

@pytest.fixture
def write_problem(tmp_path, problem_repo):
    """Store a program under tmp_path and return the path."""
    def _write(program: ConicProgram, name: str = "problem.json", sparse: bool = False):
        return problem_repo.save(program, tmp_path / name, sparse=sparse)
    return _write


@pytest.fixture
def write_json(tmp_path):
    """Dump an arbitrary payload under tmp_path and return the path."""
    def _write(payload, name: str):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path
    return _write
