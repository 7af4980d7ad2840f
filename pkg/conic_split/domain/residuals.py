"""
Program validation and residual evaluation.
"""
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .cones import ConeOps
from .entities import ConicProgram, ResidualReport, Solution
from .errors import DimensionMismatch, EmptyCone, NonFiniteEntry
from .subspace import SubspaceProjector


def validate(program: ConicProgram) -> None:
    """
    Check dimensions, cones and finiteness of a program.

    Raises the error describing the first violated invariant.

    Raises:
        EmptyCone: the cone list is empty or has zero total dimension
        DimensionMismatch: rows(A) != len(b) or cols(A) != len(c) != dim K
        NonFiniteEntry: A, b or c contains NaN or inf
    """
    m, n = program.A.shape
    if program.cones.total_dim == 0:
        raise EmptyCone("cone specification has zero dimension")
    if m != program.b.shape[0]:
        raise DimensionMismatch(f"A has {m} rows but b has length {program.b.shape[0]}")
    if n != program.c.shape[0]:
        raise DimensionMismatch(f"A has {n} columns but c has length {program.c.shape[0]}")
    if n != program.cones.total_dim:
        raise DimensionMismatch(f"A has {n} columns but the cones span {program.cones.total_dim}")

    data = program.A.data if sp.issparse(program.A) else program.A
    for name, values in (("A", data), ("b", program.b), ("c", program.c)):
        if not np.all(np.isfinite(values)):
            raise NonFiniteEntry(f"{name} contains non-finite entries")


class ResidualEvaluator:
    """Computes ResidualReports against the unscaled program."""

    def __init__(self, program: ConicProgram, projector: Optional[SubspaceProjector] = None,
                 cones: Optional[ConeOps] = None):
        self.program = program
        self.projector = projector or SubspaceProjector.build(program.A)
        self.cones = cones or ConeOps(program.cones)
        self.pinv_b = self.projector.apply_pinv_b(program.b)

    def residuals(self, x: np.ndarray, z: np.ndarray) -> ResidualReport:
        program = self.program
        slack = program.c - z
        primal_obj = program.objective(x)
        dual_obj = float(self.pinv_b @ slack)
        return ResidualReport(
            primal_res=float(np.linalg.norm(program.matvec(x) - program.b)),
            dual_res=float(np.linalg.norm(self.projector.complement(slack))),
            gap=abs(dual_obj - primal_obj),
            cone_dist_x=self.cones.distance(x),
            cone_dist_z=self.cones.distance(z),
            primal_obj=primal_obj,
            dual_obj=dual_obj,
        )

    def recover_y(self, z: np.ndarray) -> np.ndarray:
        """Least-squares multiplier for Aᵀy = c − z."""
        return self.projector.lstsq_y(self.program.c - z)

    def solution(self, x: np.ndarray, z: np.ndarray, with_y: bool = True) -> Solution:
        report = self.residuals(x, z)
        return Solution(
            x=x,
            z=z,
            y=self.recover_y(z) if with_y else None,
            primal_obj=report.primal_obj,
            dual_obj=report.dual_obj,
        )


def residuals(program: ConicProgram, x: np.ndarray, z: np.ndarray,
              projector: Optional[SubspaceProjector] = None) -> ResidualReport:
    """One-shot residual evaluation; builds a projector when none is given."""
    return ResidualEvaluator(program, projector).residuals(np.asarray(x, dtype=np.float64),
                                                           np.asarray(z, dtype=np.float64))
