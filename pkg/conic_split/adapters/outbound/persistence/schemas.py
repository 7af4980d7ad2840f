"""
Pydantic models for the JSON file formats.

Field names are part of the file contract and must not change.
"""
import re
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

FAMILY_PATTERN = re.compile(r"^(lp-normal|lp-uniform|socp|example-iii|file:.+)$")


class MatrixModel(BaseModel):
    """A as a dense row list or as (i, j, v) triplets; exactly one is set."""
    dense: Optional[List[List[float]]] = None
    triplets: Optional[List[Tuple[int, int, float]]] = None

    @model_validator(mode="after")
    def exactly_one_layout(self) -> "MatrixModel":
        if (self.dense is None) == (self.triplets is None):
            raise ValueError("A must have exactly one of 'dense' or 'triplets'")
        return self


class ConeModel(BaseModel):
    kind: Literal["nonneg", "soc"]
    dim: int


class ProblemFileModel(BaseModel):
    model_config = ConfigDict(extra="ignore")

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    A: MatrixModel
    b: List[float]
    c: List[float]
    cones: List[ConeModel]


class SolutionFileModel(BaseModel):
    model_config = ConfigDict(extra="ignore")

    x: List[float]
    z: List[float]
    y: Optional[List[float]] = None
    primal_obj: float
    dual_obj: float


class ScalingFileModel(BaseModel):
    """Fixed positive column scaling, one entry per coordinate."""
    o: List[float] = Field(min_length=1)

    @field_validator("o")
    @classmethod
    def strictly_positive(cls, values: List[float]) -> List[float]:
        if any(not (v > 0) for v in values):
            raise ValueError("scaling entries must be strictly positive")
        return values


# ============================================================================
# Benchmark specification
# ============================================================================

class BenchCellModel(BaseModel):
    """One instance recipe; `seeds` expands into one cell per seed."""
    family: str
    n: Optional[int] = Field(default=None, ge=2)
    m: Optional[int] = Field(default=None, ge=1)
    h: int = Field(default=4, ge=2)
    seed: int = 0
    seeds: Optional[List[int]] = None

    @field_validator("family")
    @classmethod
    def known_family(cls, family: str) -> str:
        if not FAMILY_PATTERN.match(family):
            raise ValueError(f"unknown family '{family}'")
        return family

    @model_validator(mode="after")
    def generated_families_need_n(self) -> "BenchCellModel":
        if self.family in ("lp-normal", "lp-uniform", "socp") and self.n is None:
            raise ValueError(f"family '{self.family}' requires n")
        return self


class BenchConfigModel(BaseModel):
    """One solver configuration applied to every cell."""
    name: str
    algorithm: Literal["split", "dr", "admm"] = "split"
    precondition: Literal["none", "sinkhorn", "adaptive"] = "none"
    condition: Optional[str] = None
    t: Optional[float] = Field(default=None, gt=0.0)
    mu: Optional[float] = Field(default=None, gt=0.0)
    fixed_scaling: Optional[str] = Field(default=None, description="'published' or a scaling file path")


class BenchOptionsModel(BaseModel):
    tol: Optional[float] = Field(default=None, gt=0.0)
    max_iters: Optional[int] = Field(default=None, ge=1)
    trace_stride: Optional[int] = Field(default=None, ge=1)
    check_every: Optional[int] = Field(default=None, ge=1)
    max_seconds: Optional[float] = Field(default=None, gt=0.0)


class BenchSpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cells: List[BenchCellModel] = Field(default_factory=list)
    configs: List[BenchConfigModel] = Field(default_factory=list)
    options: BenchOptionsModel = Field(default_factory=BenchOptionsModel)
    trace_dir: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    timing: bool = Field(default=False, description="Record wall times; off keeps reruns byte-identical")
