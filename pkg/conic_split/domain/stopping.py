"""
Termination tests evaluated on a ResidualReport.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .entities import ConicProgram, ResidualReport
from .value_objects import SolveOptions


class StoppingCriteria(ABC):
    """Decides whether an iterate is good enough to stop."""

    @abstractmethod
    def satisfied(self, report: ResidualReport) -> bool:
        pass

    @abstractmethod
    def describe(self) -> str:
        pass


class InternalCriteria(StoppingCriteria):
    """
    Absolute tolerances.

    Cone distances count toward the primal and dual tolerances; they vanish
    identically for the splitting iterate but not for the ADMM iterate.
    """

    def __init__(self, options: SolveOptions):
        self.options = options

    def satisfied(self, report: ResidualReport) -> bool:
        opts = self.options
        return (
            max(report.primal_res, report.cone_dist_x) <= opts.tol_primal
            and max(report.dual_res, report.cone_dist_z) <= opts.tol_dual
            and report.gap <= opts.tol_gap
        )

    def describe(self) -> str:
        o = self.options
        return f"internal(primal<={o.tol_primal:g}, dual<={o.tol_dual:g}, gap<={o.tol_gap:g})"


@dataclass(frozen=True)
class ReferenceCriteria(StoppingCriteria):
    """
    Beat a reference solution (x_CS, y_CS) on both counts, strictly:

        ‖Ax − b‖ < ‖Ax_CS − b‖
        |(A†b)ᵀ(c − z) − cᵀx| < |bᵀy_CS − cᵀx_CS|

    An exact reference (both bounds zero) can never be beaten.
    """
    primal_bound: float
    gap_bound: float

    @classmethod
    def from_reference(cls, program: ConicProgram, x_ref: np.ndarray, y_ref: np.ndarray) -> "ReferenceCriteria":
        x_ref = np.asarray(x_ref, dtype=np.float64)
        y_ref = np.asarray(y_ref, dtype=np.float64)
        primal_bound = float(np.linalg.norm(program.matvec(x_ref) - program.b))
        gap_bound = abs(float(program.b @ y_ref) - program.objective(x_ref))
        return cls(primal_bound=primal_bound, gap_bound=gap_bound)

    def satisfied(self, report: ResidualReport) -> bool:
        return report.primal_res < self.primal_bound and report.gap < self.gap_bound

    def describe(self) -> str:
        return f"reference(primal<{self.primal_bound:.3e}, gap<{self.gap_bound:.3e})"
