"""
Prometheus metrics for solver runs.

Metrics live in a private CollectorRegistry so several solver instances (and
tests) never collide on the process-global default registry.
"""

import logging
from pathlib import Path
from typing import Optional

from prometheus_client import CollectorRegistry, Counter, Histogram, Info, generate_latest, write_to_textfile

from conic_split import __version__

logger = logging.getLogger(__name__)

ITERATION_BUCKETS = (10, 50, 100, 300, 1_000, 3_000, 10_000, 30_000, 100_000)
SECONDS_BUCKETS = (0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0, 600.0)


class SolverMetrics:
    """Counters and histograms for solves, conditioning events and failures."""

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry or CollectorRegistry()

        self.solves = Counter(
            "conic_split_solves_total",
            "Total solves by algorithm and final status",
            ["algorithm", "status"],
            registry=self.registry,
        )
        self.iterations = Histogram(
            "conic_split_iterations",
            "Iterations per solve",
            ["algorithm"],
            buckets=ITERATION_BUCKETS,
            registry=self.registry,
        )
        self.solve_seconds = Histogram(
            "conic_split_solve_duration_seconds",
            "Wall time per solve",
            ["algorithm"],
            buckets=SECONDS_BUCKETS,
            registry=self.registry,
        )
        self.conditioning_events = Counter(
            "conic_split_conditioning_events_total",
            "Adaptive conditioning events",
            registry=self.registry,
        )
        self.failures = Counter(
            "conic_split_failures_total",
            "Failures by error type",
            ["error_type"],
            registry=self.registry,
        )
        self.info = Info("conic_split", "conic-split build information", registry=self.registry)
        self.info.info({"version": __version__})

    def track_solve(self, algorithm: str, status: str, iterations: int, seconds: float) -> None:
        self.solves.labels(algorithm=algorithm, status=status).inc()
        self.iterations.labels(algorithm=algorithm).observe(iterations)
        self.solve_seconds.labels(algorithm=algorithm).observe(seconds)

    def track_conditioning(self, events: int = 1) -> None:
        if events > 0:
            self.conditioning_events.inc(events)

    def track_failure(self, error_type: str) -> None:
        self.failures.labels(error_type=error_type).inc()

    def render(self) -> bytes:
        return generate_latest(self.registry)

    def export(self, path: Path) -> Path:
        """Write the registry in the Prometheus text format."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_to_textfile(str(path), self.registry)
        logger.info("Metrics exported", extra={"path": str(path)})
        return path
