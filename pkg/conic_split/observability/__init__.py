"""
Observability package for conic-split.
Provides structured logging and solver metrics.
"""

from .logger import clear_run_context, get_logger, set_run_context, setup_structured_logging
from .metrics import SolverMetrics

__all__ = [
    "get_logger",
    "setup_structured_logging",
    "set_run_context",
    "clear_run_context",
    "SolverMetrics",
]
