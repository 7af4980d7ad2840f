"""
Application layer - use cases that orchestrate the domain through ports.

This package contains:
- dto.py: request/response objects
- solve_problem.py: one solve with optional preconditioning, trace and solution output
- run_benchmark.py: the (cell x config) benchmark matrix
- compare_solutions.py: residual tables and strict dominance
- generate_problem.py: random instance files
"""
from .compare_solutions import CompareSolutionsUseCase
from .dto import (
    BenchCell, BenchConfigEntry, BenchRequest, BenchResponse, BenchRow,
    CompareEntry, CompareRequest, CompareResponse,
    GenerateRequest, GenerateResponse,
    RunConfig, RunResponse,
)
from .generate_problem import GenerateProblemUseCase
from .run_benchmark import RunBenchmarkUseCase
from .solve_problem import SolveProblemUseCase

__all__ = [
    "SolveProblemUseCase",
    "RunBenchmarkUseCase",
    "CompareSolutionsUseCase",
    "GenerateProblemUseCase",
    "RunConfig",
    "RunResponse",
    "BenchCell",
    "BenchConfigEntry",
    "BenchRequest",
    "BenchResponse",
    "BenchRow",
    "CompareRequest",
    "CompareEntry",
    "CompareResponse",
    "GenerateRequest",
    "GenerateResponse",
]
