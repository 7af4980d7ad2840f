"""
Compare Solutions Use Case

Tabulates the residuals of several solutions of one program and names the
solution that strictly beats every other one on both primal feasibility
and duality gap.
"""
import logging
from typing import List, Optional

import numpy as np

from conic_split.domain.entities import ResidualReport
from conic_split.domain.errors import BadSolutionFile
from conic_split.domain.ports import IProblemRepository, ISolutionRepository
from conic_split.domain.residuals import ResidualEvaluator, validate

from .dto import CompareEntry, CompareRequest, CompareResponse

logger = logging.getLogger(__name__)


def dominant_index(reports: List[ResidualReport]) -> Optional[int]:
    """Index whose primal residual and gap are both strictly smallest, else None."""
    for i, candidate in enumerate(reports):
        if all(
            candidate.primal_res < other.primal_res and candidate.gap < other.gap
            for j, other in enumerate(reports) if j != i
        ):
            return i
    return None


class CompareSolutionsUseCase:
    """Use case for comparing solution files against one problem."""

    def __init__(self, problem_repository: IProblemRepository, solution_repository: ISolutionRepository):
        self.problem_repo = problem_repository
        self.solution_repo = solution_repository

    def execute(self, request: CompareRequest) -> CompareResponse:
        """
        Execute the comparison.

        Raises:
            BadProblemFile: If the problem cannot be read
            BadSolutionFile: If a solution cannot be read or has the wrong length
        """
        program = self.problem_repo.load(request.problem_path)
        validate(program)
        evaluator = ResidualEvaluator(program)

        entries = []
        for path in request.solution_paths:
            solution = self.solution_repo.load(path)
            if solution.x.shape != (program.n,):
                raise BadSolutionFile(f"{path}: expected length {program.n}, got {solution.x.shape[0]}")
            report = evaluator.residuals(np.asarray(solution.x), np.asarray(solution.z))
            scale = max(1.0, float(np.linalg.norm(solution.x)), float(np.linalg.norm(solution.z)))
            outside = max(report.cone_dist_x, report.cone_dist_z) > request.cone_tolerance * scale
            if outside:
                logger.warning("Solution leaves the cone", extra={"path": str(path),
                                                                  "cone_dist_x": report.cone_dist_x,
                                                                  "cone_dist_z": report.cone_dist_z})
            entries.append(CompareEntry(path=str(path), report=report, outside_cone=outside))

        dominant = dominant_index([entry.report for entry in entries])
        logger.info("Comparison finished", extra={"solutions": len(entries), "dominant": dominant})
        return CompareResponse(entries=entries, dominant=dominant)
