"""
Projection onto range(Aᵀ) backed by an economic QR factorization of Aᵀ.

With Aᵀ = QR (Q n×m orthonormal, R m×m upper triangular):

    proj(v) = Q Qᵀ v
    A†w     = Q R⁻ᵀ w
    y       = R⁻¹ Qᵀ v   (least-squares solution of Aᵀy = v)
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .errors import NonFiniteEntry, RankDeficient, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOL = 1e-10
MAX_CACHED_SCALINGS = 8


@dataclass(frozen=True, eq=False)
class SubspaceProjector:
    """
    Immutable projector for range((A·diag(o))ᵀ).

    `refresh(o)` returns a projector for the column-scaled matrix and keeps
    the result in a small cache shared by every projector derived from the
    same A, so repeated scalings are not refactored.
    """
    A: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    o: np.ndarray
    rank_tol: float = DEFAULT_RANK_TOL
    _cache: Dict[bytes, "SubspaceProjector"] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def build(cls, A, rank_tol: float = DEFAULT_RANK_TOL, o: Optional[np.ndarray] = None) -> "SubspaceProjector":
        """
        Factor A (optionally column-scaled by o).

        Raises:
            ValidationError: A is empty or all zero
            NonFiniteEntry: A contains NaN or inf
            RankDeficient: numerical rank below the number of rows
        """
        dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
        dense = np.atleast_2d(dense).astype(np.float64, copy=False)
        if dense.size == 0 or not np.any(dense):
            raise ValidationError("A must be a nonzero matrix")
        if not np.all(np.isfinite(dense)):
            raise NonFiniteEntry("A contains non-finite entries")
        m, n = dense.shape
        if m > n:
            raise RankDeficient(rank=n, rows=m, message=f"A has more rows ({m}) than columns ({n})")

        scale = np.ones(n) if o is None else np.asarray(o, dtype=np.float64)
        scaled = dense * scale[None, :]
        Q, R = la.qr(scaled.T, mode="economic")

        sigma = la.svdvals(R)
        rank = int(np.sum(sigma > rank_tol * sigma[0]))
        if rank < m:
            raise RankDeficient(rank=rank, rows=m)

        logger.debug("Factored A", extra={"rows": m, "cols": n, "cond": float(sigma[0] / sigma[-1])})
        return cls(A=dense, Q=Q, R=R, o=scale, rank_tol=rank_tol)

    @property
    def m(self) -> int:
        return self.R.shape[0]

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.Q @ (self.Q.T @ v)

    def complement(self, v: np.ndarray) -> np.ndarray:
        """(I − A†A)v, projection onto the null space of A."""
        return v - self.project(v)

    def abs_subspace(self, v: np.ndarray) -> np.ndarray:
        return 2.0 * self.project(v) - v

    def pinv(self, w: np.ndarray) -> np.ndarray:
        """A†w for the (scaled) matrix this projector was built from."""
        return self.Q @ la.solve_triangular(self.R, w, trans="T")

    def apply_pinv_b(self, b: np.ndarray) -> np.ndarray:
        return self.pinv(np.asarray(b, dtype=np.float64))

    def offset(self, b: np.ndarray, c: np.ndarray, mu: float) -> np.ndarray:
        """d = A†b + μ/2·(abs_𝒜(c) − c), with c already scaled by o."""
        return self.apply_pinv_b(b) + 0.5 * mu * (self.abs_subspace(c) - c)

    def lstsq_y(self, v: np.ndarray) -> np.ndarray:
        """Least-squares y with (A·diag(o))ᵀ y ≈ v."""
        return la.solve_triangular(self.R, self.Q.T @ v)

    def condition_number(self) -> float:
        sigma = la.svdvals(self.R)
        return float(sigma[0] / sigma[-1])

    def refresh(self, o: np.ndarray) -> "SubspaceProjector":
        """Projector for range((A·diag(o))ᵀ); o is relative to the unscaled A."""
        o = np.asarray(o, dtype=np.float64)
        if o.shape != (self.n,):
            raise ValidationError(f"scaling must have length {self.n}")
        if np.any(o <= 0) or not np.all(np.isfinite(o)):
            raise ValidationError("scaling must be finite and strictly positive")
        key = o.tobytes()
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        projector = SubspaceProjector.build(self.A, rank_tol=self.rank_tol, o=o)
        object.__setattr__(projector, "_cache", self._cache)
        if len(self._cache) >= MAX_CACHED_SCALINGS:
            self._cache.pop(next(iter(self._cache)))
        self._cache[key] = projector
        return projector
