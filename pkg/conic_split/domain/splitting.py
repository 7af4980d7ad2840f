"""
The splitting iteration on s.

    d ← A†b + μ/2·(abs_𝒜(c) − c)
    repeat:
        p ← abs_K(s)
        r ← abs_𝒜(p)
        s ← s/2 − r/2 + d
    x ← (p + s)/2,  z ← (p − s)/(2μ)

With adaptive conditioning enabled the same iteration runs on the column
scaled data (AO, b, Oc) and the iterate is mapped back through O.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from .cones import ConeOps, moreau_split, star_abs
from .conditioning import AdaptiveConditioner
from .entities import ConicProgram, Solution, SolverState
from .errors import Diverged, ValidationError
from .residuals import ResidualEvaluator
from .subspace import SubspaceProjector
from .value_objects import ConditioningPolicy, SolveOptions

logger = logging.getLogger(__name__)


class SplittingSolver:
    """
    Iteration engine for a single program.

    Holds the immutable pieces (projector, cone operators, conditioner);
    all iterate data lives in the SolverState returned by `init`.
    """

    name = "split"

    def __init__(self, program: ConicProgram, options: Optional[SolveOptions] = None,
                 policy: Optional[ConditioningPolicy] = None,
                 projector: Optional[SubspaceProjector] = None,
                 evaluator: Optional[ResidualEvaluator] = None):
        self.program = program
        self.options = options or SolveOptions()
        self.cones = ConeOps(program.cones)
        self.projector = projector or SubspaceProjector.build(program.A)
        self.evaluator = evaluator or ResidualEvaluator(program, self.projector, self.cones)
        self.conditioner = None
        if policy is not None and policy.schedule.enabled:
            self.conditioner = AdaptiveConditioner(program, self.cones, self.projector, policy)
        self.state: Optional[SolverState] = None
        self._pending_xz: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @property
    def mu(self) -> float:
        return self.options.mu

    @property
    def event_fired(self) -> bool:
        """True when the last step began with a conditioning event."""
        return self.state is not None and self.state.conditioning_event

    def init(self, x0: Optional[np.ndarray] = None, z0: Optional[np.ndarray] = None) -> SolverState:
        """
        Build d and the initial s.

        Without conditioning s = 0, or x0 − μz0 for a warm start. With
        conditioning the first event at l = 1 consumes (x0, z0), defaulting
        to the cone identity for both.
        """
        n = self.program.n
        o = np.ones(n)
        d = self.projector.offset(self.program.b, self.program.c, self.mu)

        warm = x0 is not None and z0 is not None
        if warm:
            x0 = self._checked(x0, "x0")
            z0 = self._checked(z0, "z0")
        elif self.options.initial == "warm":
            raise ValidationError("warm start requested without an initial (x, z)")

        if self.conditioner is not None:
            if not warm:
                x0 = self.cones.identity_element()
                z0 = self.cones.identity_element()
            self._pending_xz = (x0, z0)
            s = x0 - self.mu * z0
        elif warm:
            s = x0 - self.mu * z0
        else:
            s = np.zeros(n)

        self.state = SolverState(
            s=s, p=np.zeros(n), r=np.zeros(n), d=d, mu=self.mu, o=o,
            projector=self.projector, cones=self.cones,
        )
        return self.state

    def _checked(self, v: np.ndarray, name: str) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64).reshape(-1)
        if v.shape != (self.program.n,):
            raise ValidationError(f"{name} must have length {self.program.n}")
        return v

    def step(self, state: Optional[SolverState] = None) -> SolverState:
        """One iteration, preceded by a conditioning event when scheduled."""
        state = state or self.state
        if state is None:
            raise ValidationError("step() called before init()")

        state.conditioning_event = False
        iteration = state.iter + 1
        if self.conditioner is not None and self.conditioner.fires_at(iteration):
            x, z = self._pending_xz if self._pending_xz is not None else (None, None)
            self._pending_xz = None
            self.conditioner.recondition(state, x=x, z=z)

        state.p = self.cones.abs_cone(state.s)
        state.r = state.projector.abs_subspace(state.p)
        state.s = 0.5 * state.s - 0.5 * state.r + state.d
        state.iter = iteration
        self._guard(state)
        return state

    def _guard(self, state: SolverState) -> None:
        if not np.all(np.isfinite(state.s)):
            raise Diverged(state.iter, "non-finite entry in s")
        norm = float(np.linalg.norm(state.s))
        if norm > self.options.divergence_norm:
            raise Diverged(state.iter, f"‖s‖ = {norm:.3e} exceeds {self.options.divergence_norm:.1e}")

    def scaled_iterate(self, state: Optional[SolverState] = None) -> Tuple[np.ndarray, np.ndarray]:
        """(x̂, ẑ) in the current scaled space, by Moreau split of s."""
        state = state or self.state
        return moreau_split(self.cones, state.s, state.mu)

    def iterate(self, state: Optional[SolverState] = None) -> Tuple[np.ndarray, np.ndarray]:
        """(x, z) of the original program: x = Ox̂, z = O⁻¹ẑ."""
        state = state or self.state
        x_hat, z_hat = self.scaled_iterate(state)
        return state.o * x_hat, z_hat / state.o

    def extract(self, state: Optional[SolverState] = None) -> Solution:
        x, z = self.iterate(state)
        return self.evaluator.solution(x, z)

    def fixed_point_residual(self, state: Optional[SolverState] = None,
                             s_candidate: Optional[np.ndarray] = None) -> float:
        """‖d − (s + |s|⋆)/2‖₂ in the state's current scaled space."""
        state = state or self.state
        s = state.s if s_candidate is None else np.asarray(s_candidate, dtype=np.float64)
        return float(np.linalg.norm(state.d - 0.5 * (s + star_abs(state.projector, self.cones, s))))

    def optimal_s(self, x: np.ndarray, z: np.ndarray, o: Optional[np.ndarray] = None) -> np.ndarray:
        """s = O⁻¹x − μOz, the fixed point associated with a KKT pair."""
        o = np.ones(self.program.n) if o is None else o
        return x / o - self.mu * o * z

    def complementarity(self, state: Optional[SolverState] = None) -> float:
        """|xᵀz| / (‖x‖‖z‖), zero when either side vanishes."""
        x, z = self.iterate(state)
        scale = float(np.linalg.norm(x) * np.linalg.norm(z))
        return abs(float(x @ z)) / scale if scale > 0 else 0.0
