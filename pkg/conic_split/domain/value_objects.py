"""
Domain value objects - immutable descriptions of cones, options and policies.

These objects validate themselves on construction and carry no numerical
state, so they are safe to share between threads and solves.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Tuple

from .errors import EmptyCone, IndivisibleConeSize, ValidationError


class ConeKind(str, Enum):
    """Kinds of cone blocks."""
    NONNEG = "nonneg"
    LORENTZ = "soc"


class Algorithm(str, Enum):
    """Iterative methods available to the harness."""
    SPLIT = "split"
    DR = "dr"
    ADMM = "admm"


class PreconditionerKind(str, Enum):
    NONE = "none"
    SINKHORN = "sinkhorn"
    ADAPTIVE = "adaptive"


class StopMode(str, Enum):
    """Internal absolute tolerances, or beat-the-reference criteria."""
    INTERNAL = "internal"
    REFERENCE = "reference"


class SolveStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    TIME_LIMIT = "time_limit"
    DIVERGED = "diverged"
    FAILED = "failed"


class ProblemFamily(str, Enum):
    """Random instance recipes."""
    LP_NORMAL = "lp-normal"
    LP_UNIFORM = "lp-uniform"
    SOCP = "socp"


@dataclass(frozen=True)
class ConeBlock:
    """One block of the product cone."""
    kind: ConeKind
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise EmptyCone(f"cone block dimension must be >= 1, got {self.dim}")
        if self.kind is ConeKind.LORENTZ and self.dim < 2:
            raise EmptyCone(f"Lorentz blocks need dim >= 2, got {self.dim}")


@dataclass(frozen=True)
class ConeSpec:
    """
    Ordered product of nonnegative-orthant and Lorentz blocks.

    A NonNeg block of size k is one block here but behaves as k scalar
    Lorentz cones everywhere a per-cone quantity is needed.
    """
    blocks: Tuple[ConeBlock, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise EmptyCone("cone specification has no blocks")

    @classmethod
    def nonneg(cls, n: int) -> "ConeSpec":
        return cls((ConeBlock(ConeKind.NONNEG, n),))

    @classmethod
    def lorentz(cls, h: int, count: int) -> "ConeSpec":
        return cls(tuple(ConeBlock(ConeKind.LORENTZ, h) for _ in range(count)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, int]]) -> "ConeSpec":
        return cls(tuple(ConeBlock(ConeKind(kind), int(dim)) for kind, dim in pairs))

    @property
    def total_dim(self) -> int:
        return sum(block.dim for block in self.blocks)

    @property
    def is_orthant(self) -> bool:
        return all(block.kind is ConeKind.NONNEG for block in self.blocks)

    def with_offsets(self) -> Iterator[Tuple[int, ConeBlock]]:
        """Yield (start index, block) pairs in order."""
        offset = 0
        for block in self.blocks:
            yield offset, block
            offset += block.dim


@dataclass(frozen=True)
class SolveOptions:
    """Options shared by every iterative method."""
    mu: float = 1.0
    max_iters: int = 100_000
    tol_primal: float = 1e-8
    tol_dual: float = 1e-8
    tol_gap: float = 1e-8
    trace_stride: int = 1
    check_every: int = 1
    initial: str = "zero"
    divergence_norm: float = 1e12
    max_seconds: Optional[float] = None

    def __post_init__(self):
        if self.mu <= 0:
            raise ValidationError("mu must be positive")
        if self.max_iters < 1:
            raise ValidationError("max_iters must be >= 1")
        if min(self.tol_primal, self.tol_dual, self.tol_gap) <= 0:
            raise ValidationError("tolerances must be positive")
        if self.trace_stride < 1 or self.check_every < 1:
            raise ValidationError("trace_stride and check_every must be >= 1")
        if self.initial not in ("zero", "warm"):
            raise ValidationError("initial must be 'zero' or 'warm'")


@dataclass(frozen=True)
class Schedule:
    """
    Set L of iterations at which adaptive conditioning fires.

    Grammar: "none", "once:K", or "start:stride[:stop]".
    """
    start: Optional[int] = None
    stride: Optional[int] = None
    stop: Optional[int] = None

    def __post_init__(self):
        if self.start is not None and self.start < 1:
            raise ValidationError("schedule indices must be >= 1")
        if self.stride is not None and self.stride < 1:
            raise ValidationError("schedule stride must be >= 1")
        if self.stop is not None and self.start is not None and self.stop < self.start:
            raise ValidationError("schedule stop precedes start")

    @classmethod
    def none(cls) -> "Schedule":
        return cls()

    @classmethod
    def once(cls, k: int) -> "Schedule":
        return cls(start=k, stride=1, stop=k)

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        text = text.strip().lower()
        if text in ("", "none"):
            return cls.none()
        parts = text.split(":")
        try:
            if parts[0] == "once" and len(parts) == 2:
                return cls.once(int(parts[1]))
            if len(parts) == 2:
                return cls(start=int(parts[0]), stride=int(parts[1]))
            if len(parts) == 3:
                return cls(start=int(parts[0]), stride=int(parts[1]), stop=int(parts[2]))
        except ValueError as exc:
            raise ValidationError(f"bad schedule '{text}': {exc}") from exc
        raise ValidationError(f"bad schedule '{text}'")

    @property
    def enabled(self) -> bool:
        return self.start is not None

    def fires_at(self, iteration: int) -> bool:
        """Membership in L ∪ {1}; a disabled schedule never fires."""
        if not self.enabled:
            return False
        if iteration == 1:
            return True
        if iteration < self.start or (self.stop is not None and iteration > self.stop):
            return False
        return (iteration - self.start) % self.stride == 0

    def __str__(self) -> str:
        if not self.enabled:
            return "none"
        if self.stop == self.start:
            return f"once:{self.start}"
        if self.stop is None:
            return f"{self.start}:{self.stride}"
        return f"{self.start}:{self.stride}:{self.stop}"


@dataclass(frozen=True)
class ConditioningPolicy:
    """Schedule, compression parameter t and clamp bounds for o."""
    schedule: Schedule = field(default_factory=Schedule.none)
    t: float = 9.2
    clamp_lo: float = 1e-8
    clamp_hi: float = 1e8

    def __post_init__(self):
        # 0 < t < 1 is stated for the heuristic but the published presets
        # use 9.2 and 1.7, so only positivity is enforced.
        if self.t <= 0:
            raise ValidationError("t must be positive")
        if not (0 < self.clamp_lo < self.clamp_hi):
            raise ValidationError("clamp bounds must satisfy 0 < lo < hi")

    @classmethod
    def lp_preset(cls) -> "ConditioningPolicy":
        return cls(schedule=Schedule(start=300, stride=100), t=9.2)

    @classmethod
    def socp_preset(cls) -> "ConditioningPolicy":
        return cls(schedule=Schedule(start=200, stride=100), t=1.7)


@dataclass(frozen=True)
class GenSpec:
    """Recipe for a random instance."""
    family: ProblemFamily
    n: int
    seed: int = 0
    m: Optional[int] = None
    h: int = 4

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("n must be >= 2")
        if self.m is not None and not (1 <= self.m <= self.n):
            raise ValidationError("m must lie in [1, n]")
        if self.family is ProblemFamily.SOCP:
            if self.h < 2:
                raise ValidationError("Lorentz block size h must be >= 2")
            if self.n % self.h != 0:
                raise IndivisibleConeSize(f"h={self.h} does not divide n={self.n}")

    @property
    def rows(self) -> int:
        return self.m if self.m is not None else (4 * self.n) // 5


def block_pairs(spec: ConeSpec) -> List[Tuple[str, int]]:
    """Serialize a cone spec as (kind, dim) pairs."""
    return [(block.kind.value, block.dim) for block in spec.blocks]
