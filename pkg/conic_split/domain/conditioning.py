"""
Diagonal scalings of the conic program.

Two families live here:

* adaptive conditioning, which recomputes a per-cone column scaling O from
  the current primal/dual iterate and restarts the splitting iteration in the
  scaled space;
* static preconditioning (D, E), including a damped ℓ₂ Sinkhorn-Knopp
  equilibration, applied to the program before any method runs.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .cones import ConeOps, moreau_split
from .entities import ConicProgram, ScalingState, SolverState
from .errors import ValidationError, ZeroRowOrColumn
from .subspace import SubspaceProjector
from .value_objects import ConditioningPolicy

logger = logging.getLogger(__name__)


# ============================================================================
# Adaptive conditioning
# ============================================================================

def compute_o(cones: ConeOps, x: np.ndarray, z: np.ndarray,
              clamp_lo: float = 1e-8, clamp_hi: float = 1e8) -> np.ndarray:
    """
    Per-cone coefficients o = |x_head − ‖x_tail‖₂| / |z_head|, clamped.

    Orthant coordinates are cones of size one (empty tail). A zero dual head
    maps to clamp_hi. The result is constant on every Lorentz block.
    """
    layout = cones.layout
    heads = layout.heads
    x = np.asarray(x, dtype=np.float64)
    per_cone = np.empty(layout.cone_count)

    # indexed by coordinate so heads keep their block order
    tail_norm = np.zeros(cones.n)
    for rows in layout.lorentz.values():
        tail_norm[rows[:, 0]] = np.linalg.norm(x[rows[:, 1:]], axis=1)
    numerator = np.abs(x[heads] - tail_norm[heads])
    denominator = np.abs(np.asarray(z, dtype=np.float64)[heads])

    zero_dual = denominator == 0.0
    per_cone[zero_dual] = clamp_hi
    per_cone[~zero_dual] = numerator[~zero_dual] / denominator[~zero_dual]
    np.clip(per_cone, clamp_lo, clamp_hi, out=per_cone)
    return cones.broadcast_heads(per_cone)


def conditioning_pair(cones: ConeOps, state: SolverState) -> Tuple[np.ndarray, np.ndarray]:
    """
    Original-space (x, z) read by a conditioning event.

    After a step these are x = O(p + s)/2 and z = O⁻¹(p − s)/(2μ), with p
    from the previous s and s already updated. The pair is not complementary
    mid-run, and its ratio is what compute_o measures. Before any step the
    Moreau split of s is used.
    """
    if state.iter == 0:
        x_hat, z_hat = moreau_split(cones, state.s, state.mu)
    else:
        x_hat = 0.5 * (state.p + state.s)
        z_hat = (state.p - state.s) / (2.0 * state.mu)
    return state.o * x_hat, z_hat / state.o


def normalize_exponent(o: np.ndarray, t: float) -> float:
    """min{1, t / (ln max(o) − ln min(o))}, or 1 when all entries agree."""
    spread = float(np.log(np.max(o)) - np.log(np.min(o)))
    if spread <= 0.0:
        return 1.0
    return min(1.0, t / spread)


def normalize_o(o: np.ndarray, t: float) -> np.ndarray:
    """Compress the dynamic range of o: O = diag(|o|^e)."""
    o = np.abs(np.asarray(o, dtype=np.float64))
    if np.any(o <= 0):
        raise ValidationError("o must be strictly positive")
    return o ** normalize_exponent(o, t)


class AdaptiveConditioner:
    """
    Scheduled reconditioning of a splitting iteration.

    At every iteration in L ∪ {1} the (x, z) of the original program, as
    read by `conditioning_pair`, yields a new O; the projector is rebuilt for range((AO)ᵀ), d is
    recomputed for the scaled data and s is recast as O⁻¹x − μOz.
    """

    def __init__(self, program: ConicProgram, cones: ConeOps, base: SubspaceProjector,
                 policy: ConditioningPolicy):
        self.program = program
        self.cones = cones
        self.base = base
        self.policy = policy
        self.events = 0

    def fires_at(self, iteration: int) -> bool:
        return self.policy.schedule.fires_at(iteration)

    def scaling_for(self, o: np.ndarray, mu: float) -> ScalingState:
        """Projector and d for a given O (o relative to the original A)."""
        projector = self.base.refresh(o)
        d = projector.offset(self.program.b, o * self.program.c, mu)
        return ScalingState(o=o, projector=projector, d=d)

    def recondition(self, state: SolverState, x: Optional[np.ndarray] = None,
                    z: Optional[np.ndarray] = None) -> Tuple[SolverState, ScalingState]:
        """
        Rescale `state` in place from the iterate (x, z).

        When x, z are omitted they come from `conditioning_pair`, using the
        scaling the last step ran under.
        """
        if x is None or z is None:
            x, z = conditioning_pair(self.cones, state)

        raw = compute_o(self.cones, x, z, self.policy.clamp_lo, self.policy.clamp_hi)
        o = normalize_o(raw, self.policy.t)
        new_scaling = self.scaling_for(o, state.mu)

        state.s = x / o - state.mu * o * z
        state.d = new_scaling.d
        state.o = o
        state.projector = new_scaling.projector
        state.conditioning_event = True
        state.events += 1
        self.events += 1

        logger.debug(
            "Reconditioned iteration",
            extra={
                "iteration": state.iter + 1,
                "o_min": float(o.min()),
                "o_max": float(o.max()),
                "exponent": normalize_exponent(raw, self.policy.t),
            },
        )
        return state, new_scaling


# ============================================================================
# Static preconditioning
# ============================================================================

@dataclass(frozen=True)
class Preconditioning:
    """
    Row scaling D and column scaling E: Â = DAE, b̂ = Db, ĉ = Ec.

    E must be constant on each Lorentz block so that E⁻¹K = K.
    """
    D: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        D = np.asarray(self.D, dtype=np.float64).reshape(-1)
        E = np.asarray(self.E, dtype=np.float64).reshape(-1)
        for name, diag in (("D", D), ("E", E)):
            if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
                raise ValidationError(f"{name} must be finite and strictly positive")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "E", E)

    @classmethod
    def identity(cls, m: int, n: int) -> "Preconditioning":
        return cls(np.ones(m), np.ones(n))

    @classmethod
    def columns(cls, m: int, o: np.ndarray) -> "Preconditioning":
        """Column-only scaling, the fixed-O variant of adaptive conditioning."""
        return cls(np.ones(m), o)

    def apply(self, program: ConicProgram) -> ConicProgram:
        if self.D.shape != (program.m,) or self.E.shape != (program.n,):
            raise ValidationError("preconditioner dimensions do not match the program")
        if not ConeOps(program.cones).is_block_constant(self.E, rtol=1e-12):
            raise ValidationError("E must be constant on each Lorentz block")
        if program.is_sparse:
            A = sp.diags(self.D) @ program.A @ sp.diags(self.E)
        else:
            A = self.D[:, None] * np.asarray(program.A) * self.E[None, :]
        return ConicProgram(A=A, b=self.D * program.b, c=self.E * program.c, cones=program.cones)

    def recover(self, x_hat: np.ndarray, z_hat: np.ndarray,
                y_hat: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
        """Map a solution of the preconditioned program back: x = Ex̂, z = E⁻¹ẑ, y = Dŷ."""
        y = None if y_hat is None else self.D * y_hat
        return self.E * x_hat, z_hat / self.E, y


def _row_col_norms(A: np.ndarray, D: np.ndarray, E: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    M = D[:, None] * A * E[None, :]
    return np.linalg.norm(M, axis=1), np.linalg.norm(M, axis=0)


def equilibration_ratios(A, D: np.ndarray, E: np.ndarray) -> Tuple[float, float]:
    """max/min ratios of the row and column ℓ₂ norms of DAE."""
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
    rows, cols = _row_col_norms(dense, D, E)
    return float(rows.max() / rows.min()), float(cols.max() / cols.min())


PUBLISHED_COND_RTOL = 0.01
BALANCED_RATIO = 1.01


@dataclass(frozen=True)
class EquilibrationCheck:
    """Condition number and norm ratios of DAE, against a published value if known."""
    cond: float
    row_ratio: float
    col_ratio: float
    published_cond: Optional[float] = None

    @property
    def balanced(self) -> bool:
        return self.row_ratio <= BALANCED_RATIO and self.col_ratio <= BALANCED_RATIO

    @property
    def matches_published(self) -> bool:
        if self.published_cond is None:
            return True
        return abs(self.cond / self.published_cond - 1.0) <= PUBLISHED_COND_RTOL


def check_equilibration(A, D: np.ndarray, E: np.ndarray,
                        published_cond: Optional[float] = None) -> EquilibrationCheck:
    """
    Measure DAE and log the result.

    A condition number more than 1% away from `published_cond` is logged at
    WARNING together with the row and column ratios.
    """
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
    rows, cols = equilibration_ratios(dense, D, E)
    check = EquilibrationCheck(
        cond=float(np.linalg.cond(D[:, None] * dense * E[None, :])),
        row_ratio=rows,
        col_ratio=cols,
        published_cond=published_cond,
    )
    extra = {"cond": check.cond, "row_ratio": rows, "col_ratio": cols}
    if check.matches_published:
        logger.debug("Sinkhorn scaling", extra=extra)
    else:
        logger.warning("Sinkhorn scaling deviates from the published condition number",
                       extra={**extra, "published_cond": published_cond, "balanced": check.balanced})
    return check


def sinkhorn_knopp(A, iters: int = 100, damping: float = 0.9,
                   tol: float = 1e-6) -> Tuple[np.ndarray, np.ndarray]:
    """
    Damped ℓ₂ Sinkhorn-Knopp equilibration of A.

    Alternates row and column sweeps; each sweep moves the scaling a fraction
    `damping` of the way (in log space) toward equal norms. Rows are driven to
    norm sqrt(n/m) and columns to 1 so that both targets share ‖DAE‖_F².

    Returns:
        (D, E) as positive vectors of length m and n

    Raises:
        ZeroRowOrColumn: A has an all-zero row or column
    """
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
    m, n = dense.shape
    if np.any(~dense.any(axis=1)) or np.any(~dense.any(axis=0)):
        raise ZeroRowOrColumn("cannot equilibrate a matrix with a zero row or column")
    if not (0.0 < damping <= 1.0):
        raise ValidationError("damping must lie in (0, 1]")

    row_target = np.sqrt(n / m)
    D = np.ones(m)
    E = np.ones(n)
    for sweep in range(1, iters + 1):
        rows, _ = _row_col_norms(dense, D, E)
        D *= (row_target / rows) ** damping
        _, cols = _row_col_norms(dense, D, E)
        E *= (1.0 / cols) ** damping

        rows, cols = _row_col_norms(dense, D, E)
        if rows.max() / rows.min() <= 1.0 + tol and cols.max() / cols.min() <= 1.0 + tol:
            logger.debug("Sinkhorn-Knopp converged", extra={"sweeps": sweep})
            break
    return D, E
