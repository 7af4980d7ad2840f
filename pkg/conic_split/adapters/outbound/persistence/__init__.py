"""
Persistence adapters - JSON and CSV implementations of the storage ports.
"""
from .csv_writers import SUMMARY_COLUMNS, TRACE_COLUMNS, CsvSummaryWriter, CsvTraceWriter, meta_path
from .bench_spec import load_bench_request
from .json_repositories import JsonProblemRepository, JsonSolutionRepository, load_scaling, read_model

__all__ = [
    "JsonProblemRepository",
    "JsonSolutionRepository",
    "CsvTraceWriter",
    "CsvSummaryWriter",
    "load_scaling",
    "load_bench_request",
    "read_model",
    "meta_path",
    "TRACE_COLUMNS",
    "SUMMARY_COLUMNS",
]
