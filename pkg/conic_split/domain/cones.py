"""
Projection and reflection onto products of orthants and Lorentz cones.

Lorentz blocks of equal size are stacked into a (count, dim) index table
so one vectorized pass handles all of them.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ValidationError
from .value_objects import ConeKind, ConeSpec


@dataclass(frozen=True)
class ConeLayout:
    """Index tables derived from a ConeSpec."""
    n: int
    orthant: np.ndarray
    lorentz: Dict[int, np.ndarray]
    heads: np.ndarray
    block_of: np.ndarray

    @classmethod
    def from_spec(cls, cones: ConeSpec) -> "ConeLayout":
        orthant = []
        lorentz: Dict[int, list] = {}
        heads = []
        block_of = np.empty(cones.total_dim, dtype=np.int64)
        block_id = 0
        for offset, block in cones.with_offsets():
            if block.kind is ConeKind.NONNEG:
                # every coordinate is its own scalar cone
                idx = np.arange(offset, offset + block.dim)
                orthant.extend(idx.tolist())
                heads.extend(idx.tolist())
                block_of[idx] = np.arange(block_id, block_id + block.dim)
                block_id += block.dim
            else:
                lorentz.setdefault(block.dim, []).append(list(range(offset, offset + block.dim)))
                heads.append(offset)
                block_of[offset:offset + block.dim] = block_id
                block_id += 1
        return cls(
            n=cones.total_dim,
            orthant=np.asarray(orthant, dtype=np.int64),
            lorentz={dim: np.asarray(rows, dtype=np.int64) for dim, rows in lorentz.items()},
            heads=np.asarray(heads, dtype=np.int64),
            block_of=block_of,
        )

    @property
    def cone_count(self) -> int:
        return len(self.heads)


@dataclass(frozen=True)
class ConeOps:
    """
    Cone operators for K, optionally carrying per-block scale factors.

    Scales are the restriction of O to each cone and must be constant on a
    Lorentz block, which makes O⁻¹K equal to K blockwise; projection is
    therefore always onto the unscaled cone.
    """
    cones: ConeSpec
    scales: Optional[np.ndarray] = None
    layout: ConeLayout = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "layout", ConeLayout.from_spec(self.cones))
        if self.scales is not None:
            scales = np.asarray(self.scales, dtype=np.float64)
            if scales.shape != (self.layout.n,):
                raise ValidationError("scale vector length must equal the cone dimension")
            if np.any(scales <= 0) or not np.all(np.isfinite(scales)):
                raise ValidationError("cone scales must be finite and strictly positive")
            if not self.is_block_constant(scales):
                raise ValidationError("scales must be constant on each Lorentz block")
            object.__setattr__(self, "scales", scales)

    @property
    def n(self) -> int:
        return self.layout.n

    def is_block_constant(self, values: np.ndarray, rtol: float = 0.0) -> bool:
        for rows in self.layout.lorentz.values():
            block_vals = values[rows]
            spread = np.abs(block_vals - block_vals[:, :1])
            if np.any(spread > rtol * np.abs(block_vals[:, :1])):
                return False
        return True

    def broadcast_heads(self, per_cone: np.ndarray) -> np.ndarray:
        """Expand one value per cone (ordered as `layout.heads`) to length n."""
        out = np.empty(self.n)
        out[self.layout.heads] = per_cone
        for rows in self.layout.lorentz.values():
            out[rows] = out[rows[:, :1]]
        return out

    def block_geometric_mean(self, values: np.ndarray) -> np.ndarray:
        """Replace each Lorentz block of a positive vector by its geometric mean."""
        out = np.array(values, dtype=np.float64)
        for rows in self.layout.lorentz.values():
            means = np.exp(np.mean(np.log(out[rows]), axis=1, keepdims=True))
            out[rows] = means
        return out

    def project(self, v: np.ndarray) -> np.ndarray:
        """Euclidean projection onto K."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n,):
            raise ValidationError(f"expected vector of length {self.n}, got {v.shape}")
        u = v.copy()
        if self.layout.orthant.size:
            idx = self.layout.orthant
            u[idx] = np.maximum(v[idx], 0.0)
        for rows in self.layout.lorentz.values():
            u[rows] = _project_lorentz_rows(v[rows])
        return u

    def abs_cone(self, v: np.ndarray) -> np.ndarray:
        """Reflection 2·proj_K(v) − v; componentwise |v| on orthant blocks."""
        return 2.0 * self.project(v) - v

    def distance(self, v: np.ndarray) -> float:
        return float(np.linalg.norm(v - self.project(v)))

    def identity_element(self) -> np.ndarray:
        """1 on orthant coordinates and Lorentz heads, 0 on Lorentz tails."""
        e = np.zeros(self.n)
        e[self.layout.heads] = 1.0
        return e


def _project_lorentz_rows(rows: np.ndarray) -> np.ndarray:
    """Project each row w = (t, x) onto {t ≥ ‖x‖₂}."""
    t = rows[:, 0]
    x = rows[:, 1:]
    norm_x = np.linalg.norm(x, axis=1)
    out = np.zeros_like(rows)

    inside = norm_x <= t
    out[inside] = rows[inside]

    # polar cone (norm_x <= -t) stays zero
    boundary = ~inside & (norm_x > -t)
    if np.any(boundary):
        alpha = 0.5 * (t[boundary] + norm_x[boundary])
        out[boundary, 0] = alpha
        out[boundary, 1:] = (alpha / norm_x[boundary])[:, None] * x[boundary]
    return out


def project_lorentz(v: np.ndarray) -> np.ndarray:
    """Projection of a single vector onto the Lorentz cone of its length."""
    v = np.asarray(v, dtype=np.float64)
    return _project_lorentz_rows(v[None, :])[0]


def moreau_split(cones: ConeOps, s: np.ndarray, mu: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    (x, z) = (proj_K(s), (proj_K(s) − s)/μ).

    Equal to ((p+s)/2, (p−s)/(2μ)) with p = abs_K(s); x ⊥ z exactly.
    """
    x = cones.project(s)
    return x, (x - s) / mu


def star_abs(projector, cones: ConeOps, v: np.ndarray) -> np.ndarray:
    """|v|⋆ = abs_𝒜(abs_K(v))."""
    return projector.abs_subspace(cones.abs_cone(v))


def split_vector(cones: ConeSpec, v: np.ndarray) -> Tuple[np.ndarray, ...]:
    """Split v into per-block views."""
    return tuple(v[offset:offset + block.dim] for offset, block in cones.with_offsets())
