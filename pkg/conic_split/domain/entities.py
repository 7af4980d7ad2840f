"""
Domain entities - the conic program, solver state and the reports derived
from them.

Programs, solutions and reports are immutable after construction; the
solver state is the one mutable object and belongs to exactly one solve.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np
import scipy.sparse as sp

from .value_objects import ConeSpec, SolveStatus

Matrix = Union[np.ndarray, sp.csr_matrix]


def _frozen_vector(values: Any) -> np.ndarray:
    vector = np.array(values, dtype=np.float64).reshape(-1)
    vector.setflags(write=False)
    return vector


@dataclass(frozen=True)
class ConicProgram:
    """
    minimize cᵀx subject to Ax = b, x ∈ K.

    A is kept dense unless a scipy sparse matrix is supplied, in which case
    it is stored in CSR form. Dimensions are not checked here; see
    `residuals.validate`.
    """
    A: Matrix
    b: np.ndarray
    c: np.ndarray
    cones: ConeSpec

    def __post_init__(self):
        if sp.issparse(self.A):
            A = sp.csr_matrix(self.A, dtype=np.float64)
        else:
            A = np.array(self.A, dtype=np.float64, ndmin=2)
            A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", _frozen_vector(self.b))
        object.__setattr__(self, "c", _frozen_vector(self.c))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.A)

    def dense_A(self) -> np.ndarray:
        return self.A.toarray() if self.is_sparse else np.asarray(self.A)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.A @ x).reshape(-1)

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x)


@dataclass(frozen=True)
class Solution:
    """Primal x, dual slack z, optional multiplier y and both objectives."""
    x: np.ndarray
    z: np.ndarray
    y: Optional[np.ndarray]
    primal_obj: float
    dual_obj: float

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen_vector(self.x))
        object.__setattr__(self, "z", _frozen_vector(self.z))
        if self.y is not None:
            object.__setattr__(self, "y", _frozen_vector(self.y))


@dataclass(frozen=True)
class ResidualReport:
    """Feasibility, gap and cone-distance measurements for one (x, z)."""
    primal_res: float
    dual_res: float
    gap: float
    cone_dist_x: float
    cone_dist_z: float
    primal_obj: float
    dual_obj: float

    @property
    def combined(self) -> float:
        """max(primal_res, dual_res, gap), the scalar plotted per iteration."""
        return max(self.primal_res, self.dual_res, self.gap)

    @property
    def kkt_max(self) -> float:
        return max(self.combined, self.cone_dist_x, self.cone_dist_z)

    def to_dict(self) -> Dict[str, float]:
        return {
            "primal_res": self.primal_res,
            "dual_res": self.dual_res,
            "gap": self.gap,
            "cone_dist_x": self.cone_dist_x,
            "cone_dist_z": self.cone_dist_z,
            "primal_obj": self.primal_obj,
            "dual_obj": self.dual_obj,
        }


@dataclass
class SolverState:
    """
    Iterate of the splitting method.

    The vectors live in the scaled space defined by `o` (the diagonal of O);
    with o = 1 this is the plain iteration. `projector` spans range((AO)ᵀ).
    """
    s: np.ndarray
    p: np.ndarray
    r: np.ndarray
    d: np.ndarray
    mu: float
    o: np.ndarray
    projector: Any
    cones: Any
    iter: int = 0
    conditioning_event: bool = False
    events: int = 0


@dataclass
class ScalingState:
    """Current diagonal O with the projector and d built for it."""
    o: np.ndarray
    projector: Any
    d: np.ndarray


@dataclass(frozen=True)
class TraceRecord:
    """One row of the per-iteration trace."""
    iter: int
    primal_res: float
    dual_res: float
    gap: float
    wall_ms: Optional[float]
    conditioning_event: bool = False

    @property
    def combined(self) -> float:
        return max(self.primal_res, self.dual_res, self.gap)


@dataclass
class SolveOutcome:
    """Result of driving an iterative method to termination."""
    status: SolveStatus
    solution: Optional[Solution]
    report: Optional[ResidualReport]
    iterations: int
    wall_ms: float
    trace: List[TraceRecord] = field(default_factory=list)
    message: Optional[str] = None

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED
