"""
Douglas-Rachford and ADMM reference methods.

Both split the program into f = indicator of K and
g(x) = cᵀx + indicator{Ax = b}; they share the cone operators and the
subspace projector with the splitting solver.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .cones import ConeOps
from .entities import ConicProgram, Solution
from .errors import Diverged, ValidationError
from .residuals import ResidualEvaluator
from .subspace import SubspaceProjector
from .value_objects import SolveOptions

logger = logging.getLogger(__name__)


def prox_affine_linear(projector: SubspaceProjector, pinv_b: np.ndarray, c: np.ndarray,
                       v: np.ndarray, mu: float) -> np.ndarray:
    """argmin_{Ax=b} μcᵀx + ½‖x − v‖² = (I − A†A)(v − μc) + A†b."""
    return projector.complement(v - mu * c) + pinv_b


@dataclass
class BaselineState:
    """
    Iterate of a baseline method.

    For Douglas-Rachford `x` and `z` are the primal point and the governing
    sequence; for ADMM `x` is x₂, `x1` the cone-side copy and `z` the scaled
    multiplier of x₁ = x₂.
    """
    x: np.ndarray
    z: np.ndarray
    x1: Optional[np.ndarray] = None
    iter: int = 0


class _BaselineSolver:
    name = "baseline"

    def __init__(self, program: ConicProgram, options: Optional[SolveOptions] = None,
                 projector: Optional[SubspaceProjector] = None,
                 evaluator: Optional[ResidualEvaluator] = None):
        self.program = program
        self.options = options or SolveOptions()
        self.cones = ConeOps(program.cones)
        self.projector = projector or SubspaceProjector.build(program.A)
        self.evaluator = evaluator or ResidualEvaluator(program, self.projector, self.cones)
        self.pinv_b = self.projector.apply_pinv_b(program.b)
        self.state: Optional[BaselineState] = None

    @property
    def mu(self) -> float:
        return self.options.mu

    @property
    def event_fired(self) -> bool:
        return False

    def prox_g(self, v: np.ndarray, mu: Optional[float] = None) -> np.ndarray:
        return prox_affine_linear(self.projector, self.pinv_b, self.program.c, v,
                                  self.mu if mu is None else mu)

    def _guard(self, *vectors: np.ndarray) -> None:
        for v in vectors:
            if not np.all(np.isfinite(v)):
                raise Diverged(self.state.iter, "non-finite iterate")
            if np.linalg.norm(v) > self.options.divergence_norm:
                raise Diverged(self.state.iter, "iterate norm exceeds the divergence bound")

    def _require_state(self) -> BaselineState:
        if self.state is None:
            raise ValidationError("step() called before init()")
        return self.state

    def extract(self) -> Solution:
        x, z = self.iterate()
        return self.evaluator.solution(x, z)


class DouglasRachfordSolver(_BaselineSolver):
    """
    x ← proj_K(z)
    z ← z + prox_g(2x − z) − x

    The dual slack is recovered as (proj_K(z) − z)/μ.
    """

    name = "dr"

    def init(self, x0: Optional[np.ndarray] = None, z0: Optional[np.ndarray] = None) -> BaselineState:
        n = self.program.n
        # zero start unless a warm pair is given; recorded in trace metadata
        z = np.zeros(n) if x0 is None or z0 is None else np.asarray(x0) - self.mu * np.asarray(z0)
        self.state = BaselineState(x=self.cones.project(z), z=z)
        return self.state

    def dr_step(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """One Douglas-Rachford update of the governing sequence."""
        x = self.cones.project(z)
        return x, z + self.prox_g(2.0 * x - z) - x

    def step(self) -> BaselineState:
        state = self._require_state()
        state.x, state.z = self.dr_step(state.z)
        state.iter += 1
        self._guard(state.z)
        return state

    def iterate(self) -> Tuple[np.ndarray, np.ndarray]:
        state = self._require_state()
        x = self.cones.project(state.z)
        return x, (x - state.z) / self.mu


class AdmmSolver(_BaselineSolver):
    """
    x₁ ← proj_K(x₂ − z/μ)
    x₂ ← prox_{g/μ}(x₁ + z/μ)
    z  ← z + μ(x₁ − x₂)

    At a fixed point z is the dual slack of the program.
    """

    name = "admm"

    def init(self, x0: Optional[np.ndarray] = None, z0: Optional[np.ndarray] = None) -> BaselineState:
        n = self.program.n
        x2 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=np.float64)
        z = np.zeros(n) if z0 is None else np.asarray(z0, dtype=np.float64)
        self.state = BaselineState(x=x2, z=z, x1=np.zeros(n))
        return self.state

    def admm_step(self, x2: np.ndarray, z: np.ndarray,
                  mu: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        mu = self.mu if mu is None else mu
        x1 = self.cones.project(x2 - z / mu)
        x2 = self.prox_g(x1 + z / mu, 1.0 / mu)
        z = z + mu * (x1 - x2)
        return x1, x2, z

    def step(self) -> BaselineState:
        state = self._require_state()
        state.x1, state.x, state.z = self.admm_step(state.x, state.z)
        state.iter += 1
        self._guard(state.x, state.z)
        return state

    def iterate(self) -> Tuple[np.ndarray, np.ndarray]:
        state = self._require_state()
        return state.x.copy(), state.z.copy()
