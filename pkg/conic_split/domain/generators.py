"""
Reproducible random instances and the bundled three-row example.

Every array draws from its own PCG64 stream spawned from SeedSequence(seed),
and normal variates come from the inverse normal CDF applied to 53-bit
uniforms, so instances depend only on (family, n, m, h, seed).
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import ndtri

from .cones import ConeOps
from .entities import ConicProgram
from .errors import ValidationError
from .value_objects import ConeSpec, GenSpec, ProblemFamily

_STREAMS = ("A", "x_dot", "c")
_MANTISSA = 2 ** 53


class InstanceStreams:
    """Named random streams for one instance."""

    def __init__(self, seed: int):
        children = np.random.SeedSequence(seed).spawn(len(_STREAMS))
        self._generators = {
            name: np.random.Generator(np.random.PCG64(child))
            for name, child in zip(_STREAMS, children)
        }

    def uniform(self, stream: str, shape, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        """Open-interval uniforms on (low, high) from 53-bit integers."""
        k = self._generators[stream].integers(0, _MANTISSA, size=shape, dtype=np.int64)
        u = (k.astype(np.float64) + 0.5) / _MANTISSA
        return low + (high - low) * u

    def normal(self, stream: str, shape) -> np.ndarray:
        return ndtri(self.uniform(stream, shape))


def gen_lp(spec: GenSpec) -> ConicProgram:
    """
    Random LP over the nonnegative orthant.

    lp-normal:  A ~ N(0,1), b = Aẋ with ẋ ~ U[0,1], c ~ N(0,1)
    lp-uniform: A ~ U[−1,1], b = A|ẋ| with ẋ ~ N(0,1), c ~ N(0,1)
    """
    m, n = spec.rows, spec.n
    streams = InstanceStreams(spec.seed)
    if spec.family is ProblemFamily.LP_NORMAL:
        A = streams.normal("A", (m, n))
        x_dot = streams.uniform("x_dot", n)
    elif spec.family is ProblemFamily.LP_UNIFORM:
        A = streams.uniform("A", (m, n), -1.0, 1.0)
        x_dot = np.abs(streams.normal("x_dot", n))
    else:
        raise ValidationError(f"gen_lp cannot build family {spec.family.value}")
    c = streams.normal("c", n)
    return ConicProgram(A=A, b=A @ x_dot, c=c, cones=ConeSpec.nonneg(n))


def gen_socp(spec: GenSpec) -> ConicProgram:
    """
    Random SOCP over n/h Lorentz cones of size h.

    A ~ U[−1,1], b = A·abs_K(ẋ) with ẋ ~ U[0,1], c ~ U[0,1].
    """
    if spec.family is not ProblemFamily.SOCP:
        raise ValidationError(f"gen_socp cannot build family {spec.family.value}")
    m, n = spec.rows, spec.n
    cones = ConeSpec.lorentz(spec.h, n // spec.h)
    streams = InstanceStreams(spec.seed)
    A = streams.uniform("A", (m, n), -1.0, 1.0)
    x_feasible = ConeOps(cones).abs_cone(streams.uniform("x_dot", n))
    c = streams.uniform("c", n)
    return ConicProgram(A=A, b=A @ x_feasible, c=c, cones=cones)


def generate(spec: GenSpec) -> ConicProgram:
    if spec.family is ProblemFamily.SOCP:
        return gen_socp(spec)
    return gen_lp(spec)


def feasible_point(spec: GenSpec) -> np.ndarray:
    """The generating point x₀ ∈ K with Ax₀ = b."""
    streams = InstanceStreams(spec.seed)
    if spec.family is ProblemFamily.LP_NORMAL:
        return streams.uniform("x_dot", spec.n)
    if spec.family is ProblemFamily.LP_UNIFORM:
        return np.abs(streams.normal("x_dot", spec.n))
    cones = ConeOps(ConeSpec.lorentz(spec.h, spec.n // spec.h))
    return cones.abs_cone(streams.uniform("x_dot", spec.n))


@dataclass(frozen=True)
class ExampleIII:
    """Three-row LP with its published scalings and condition numbers."""
    program: ConicProgram
    D_SK: np.ndarray
    E_SK: np.ndarray
    D_AC: np.ndarray
    E_AC: np.ndarray
    expected_conds: Tuple[float, float, float]


def example_iii() -> ExampleIII:
    A = np.array([
        [3.57, 3.45, 3.33, 64.24, -72.76],
        [3.45, 3.33, 3.23, 95.14, -23.34],
        [3.33, 3.23, 3.13, 93.53, -17.43],
    ])
    b = np.array([-10.44, 20.65, 22.94])
    c = np.array([0.37, 1.93, -0.12, -0.38, 1.01])
    return ExampleIII(
        program=ConicProgram(A=A, b=b, c=c, cones=ConeSpec.nonneg(5)),
        D_SK=np.array([0.0217, 0.0215, 0.0222]),
        E_SK=np.full(5, 0.4722),
        D_AC=np.ones(3),
        E_AC=np.array([0.0792, 0.0884, 14.5484, 292.9524, 316.2179]),
        expected_conds=(2046.4, 2044.38, 72079.13),
    )


def published_sinkhorn_cond(program: ConicProgram) -> Optional[float]:
    """Published cond(DAE) after Sinkhorn-Knopp when `program` has the bundled example's A."""
    example = example_iii()
    A = program.dense_A()
    if A.shape != example.program.A.shape or not np.array_equal(A, example.program.A):
        return None
    return example.expected_conds[1]
