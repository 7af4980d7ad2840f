"""
Generate Problem Use Case
"""
import logging

from conic_split.domain.generators import generate
from conic_split.domain.ports import IProblemRepository
from conic_split.domain.residuals import validate

from .dto import GenerateRequest, GenerateResponse

logger = logging.getLogger(__name__)


class GenerateProblemUseCase:
    """Builds a random instance and stores it as a problem file."""

    def __init__(self, problem_repository: IProblemRepository):
        self.problem_repo = problem_repository

    def execute(self, request: GenerateRequest) -> GenerateResponse:
        program = generate(request.spec)
        validate(program)
        path = self.problem_repo.save(program, request.out, sparse=request.sparse)
        logger.info(
            "Generated problem",
            extra={"family": request.spec.family.value, "n": program.n, "m": program.m,
                   "seed": request.spec.seed, "path": str(path)},
        )
        return GenerateResponse(path=path, m=program.m, n=program.n, cone_blocks=len(program.cones.blocks))
