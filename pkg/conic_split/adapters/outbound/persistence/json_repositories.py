"""
JSON file implementations of the problem and solution ports.

Files are parsed with the stdlib json module (which accepts NaN/Infinity
literals, so non-finite data reaches `validate` and is reported there) and
checked against the pydantic schemas.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Tuple, Type, TypeVar

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ValidationError as SchemaError

from conic_split.domain.entities import ConicProgram, Solution
from conic_split.domain.errors import (
    BadProblemFile, BadReferenceFile, BadSolutionFile, DomainError, PersistenceError,
    ValidationError as ModelInvariantError,
)
from conic_split.domain.ports import IProblemRepository, ISolutionRepository
from conic_split.domain.value_objects import ConeSpec, block_pairs

from .schemas import ProblemFileModel, ScalingFileModel, SolutionFileModel

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def read_model(path: Path, model: Type[M], error: Type[PersistenceError]) -> M:
    """Read and validate a JSON file, mapping every failure to `error`."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise error(f"{path}: file not found") from e
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise error(f"{path}: {e}") from e
    try:
        return model.model_validate(raw)
    except SchemaError as e:
        raise error(f"{path}: {e.error_count()} schema error(s): {e.errors()[0]['msg']}") from e


def write_json(payload: Dict[str, Any], path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise PersistenceError(f"{path}: {e}") from e
    return path


class JsonProblemRepository(IProblemRepository):
    """Problem files: {"m","n","A":{"dense"|"triplets"},"b","c","cones"}."""

    def load(self, path: Path) -> ConicProgram:
        model = read_model(path, ProblemFileModel, BadProblemFile)
        m, n = model.m, model.n
        try:
            if model.A.dense is not None:
                A = np.array(model.A.dense, dtype=np.float64)
                if A.shape != (m, n):
                    raise BadProblemFile(f"{path}: dense A has shape {A.shape}, header says ({m}, {n})")
            else:
                triplets = np.array(model.A.triplets, dtype=np.float64).reshape(-1, 3)
                rows, cols = triplets[:, 0].astype(np.int64), triplets[:, 1].astype(np.int64)
                if rows.size and (rows.min() < 0 or rows.max() >= m or cols.min() < 0 or cols.max() >= n):
                    raise BadProblemFile(f"{path}: triplet index outside ({m}, {n})")
                A = sp.csr_matrix((triplets[:, 2], (rows, cols)), shape=(m, n))
            cones = ConeSpec.from_pairs((cone.kind, cone.dim) for cone in model.cones)
        except (PersistenceError, ModelInvariantError):
            raise
        except (DomainError, ValueError) as e:
            raise BadProblemFile(f"{path}: {e}") from e

        program = ConicProgram(A=A, b=model.b, c=model.c, cones=cones)
        logger.debug("Loaded problem", extra={"path": str(path), "m": m, "n": n, "sparse": program.is_sparse})
        return program

    def save(self, program: ConicProgram, path: Path, sparse: bool = False) -> Path:
        if sparse:
            coo = sp.coo_matrix(program.A)
            matrix = {"triplets": [[int(i), int(j), float(v)] for i, j, v in zip(coo.row, coo.col, coo.data)]}
        else:
            matrix = {"dense": program.dense_A().tolist()}
        payload = {
            "m": program.m,
            "n": program.n,
            "A": matrix,
            "b": program.b.tolist(),
            "c": program.c.tolist(),
            "cones": [{"kind": kind, "dim": dim} for kind, dim in block_pairs(program.cones)],
        }
        return write_json(payload, path)

    def load_scaling(self, path: Path) -> np.ndarray:
        return load_scaling(path)


class JsonSolutionRepository(ISolutionRepository):
    """Solution files: {"x","z","y"|null,"primal_obj","dual_obj"}."""

    def load(self, path: Path) -> Solution:
        model = read_model(path, SolutionFileModel, BadSolutionFile)
        if len(model.x) != len(model.z):
            raise BadSolutionFile(f"{path}: x and z lengths differ")
        return Solution(x=model.x, z=model.z, y=model.y,
                        primal_obj=model.primal_obj, dual_obj=model.dual_obj)

    def save(self, solution: Solution, path: Path) -> Path:
        payload = {
            "x": solution.x.tolist(),
            "z": solution.z.tolist(),
            "y": None if solution.y is None else solution.y.tolist(),
            "primal_obj": solution.primal_obj,
            "dual_obj": solution.dual_obj,
        }
        return write_json(payload, path)

    def load_reference(self, path: Path) -> Tuple[np.ndarray, np.ndarray]:
        model = read_model(path, SolutionFileModel, BadReferenceFile)
        if model.y is None:
            raise BadReferenceFile(f"{path}: reference solutions must carry y")
        return np.asarray(model.x, dtype=np.float64), np.asarray(model.y, dtype=np.float64)


def load_scaling(path: Path) -> np.ndarray:
    """Read a fixed column scaling {"o": [...]}."""
    model = read_model(path, ScalingFileModel, BadProblemFile)
    return np.asarray(model.o, dtype=np.float64)
