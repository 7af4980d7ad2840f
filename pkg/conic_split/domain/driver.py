"""
Shared iteration loop for every method.

The driver owns termination, tracing and timing; methods only know how to
take a step and report their current (x, z).
"""
import logging
import time
from typing import Callable, Optional, Protocol, Tuple, runtime_checkable

import numpy as np

from .entities import ResidualReport, SolveOutcome, TraceRecord
from .errors import Diverged
from .residuals import ResidualEvaluator
from .stopping import StoppingCriteria
from .value_objects import SolveOptions, SolveStatus

logger = logging.getLogger(__name__)

Recover = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


@runtime_checkable
class IterativeMethod(Protocol):
    """Anything the driver can iterate."""

    name: str

    def init(self, x0: Optional[np.ndarray] = None, z0: Optional[np.ndarray] = None): ...

    def step(self): ...

    def iterate(self) -> Tuple[np.ndarray, np.ndarray]: ...

    @property
    def event_fired(self) -> bool: ...


class Driver:
    """
    Runs an IterativeMethod until the criteria hold, the iteration or time
    budget runs out, or the method diverges.

    `recover` maps the method's (x, z) to the program the evaluator was
    built for, so residuals are always reported on the original data even
    when the method runs on a preconditioned copy.
    """

    def __init__(self, evaluator: ResidualEvaluator, criteria: StoppingCriteria,
                 options: SolveOptions, recover: Optional[Recover] = None,
                 clock: Callable[[], float] = time.perf_counter):
        self.evaluator = evaluator
        self.criteria = criteria
        self.options = options
        self.recover = recover
        self.clock = clock

    def _current(self, method: IterativeMethod) -> Tuple[np.ndarray, np.ndarray]:
        x, z = method.iterate()
        if self.recover is not None:
            x, z = self.recover(x, z)
        return x, z

    def run(self, method: IterativeMethod, x0: Optional[np.ndarray] = None,
            z0: Optional[np.ndarray] = None) -> SolveOutcome:
        opts = self.options
        trace = []
        started = self.clock()
        method.init(x0, z0)

        status = SolveStatus.MAX_ITERS
        message = None
        report: Optional[ResidualReport] = None
        iteration = 0

        def elapsed_ms() -> float:
            return (self.clock() - started) * 1000.0

        for iteration in range(1, opts.max_iters + 1):
            try:
                method.step()
            except Diverged as exc:
                logger.warning("Iteration diverged", extra={"algorithm": method.name, "iteration": exc.iteration})
                return SolveOutcome(status=SolveStatus.DIVERGED, solution=None, report=report,
                                    iterations=exc.iteration, wall_ms=elapsed_ms(), trace=trace,
                                    message=str(exc))

            event = method.event_fired
            check = iteration % opts.check_every == 0
            record = iteration % opts.trace_stride == 0
            timed_out = opts.max_seconds is not None and elapsed_ms() > opts.max_seconds * 1000.0
            last = iteration == opts.max_iters or timed_out
            if not (check or record or last):
                continue

            report = self.evaluator.residuals(*self._current(method))
            done = check and self.criteria.satisfied(report)
            if record or done or last:
                trace.append(TraceRecord(
                    iter=iteration,
                    primal_res=report.primal_res,
                    dual_res=report.dual_res,
                    gap=report.gap,
                    wall_ms=elapsed_ms(),
                    conditioning_event=event,
                ))
            if done:
                status = SolveStatus.CONVERGED
                break
            if timed_out:
                status = SolveStatus.TIME_LIMIT
                message = f"time limit of {opts.max_seconds:g}s reached"
                break

        if status is SolveStatus.MAX_ITERS:
            message = f"no convergence within {opts.max_iters} iterations ({self.criteria.describe()})"

        x, z = self._current(method)
        if report is None or not trace or trace[-1].iter != iteration:
            report = self.evaluator.residuals(x, z)
            trace.append(TraceRecord(iteration, report.primal_res, report.dual_res, report.gap,
                                     elapsed_ms(), method.event_fired))
        solution = self.evaluator.solution(x, z)
        return SolveOutcome(status=status, solution=solution, report=report, iterations=iteration,
                            wall_ms=elapsed_ms(), trace=trace, message=message)
