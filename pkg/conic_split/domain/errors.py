"""
Domain exceptions.

Every failure raised by the numerical core derives from DomainError so the
application layer can translate it into a status without catching bare
Exception.
"""
from typing import Optional


class DomainError(Exception):
    """Base exception for domain layer errors."""

    code: str = "DomainError"


class ValidationError(DomainError):
    """Exception for problem data that violates a model invariant."""

    code = "ValidationError"


class DimensionMismatch(ValidationError):
    code = "DimensionMismatch"


class EmptyCone(ValidationError):
    code = "EmptyCone"


class NonFiniteEntry(ValidationError):
    code = "NonFiniteEntry"


class IndivisibleConeSize(ValidationError):
    code = "IndivisibleConeSize"


class ZeroRowOrColumn(ValidationError):
    code = "ZeroRowOrColumn"


class FactorizationError(DomainError):
    """Exception for failures while factorizing the constraint matrix."""

    code = "FactorizationError"


class RankDeficient(FactorizationError):
    """Numerical rank of A fell below its row count."""

    code = "RankDeficient"

    def __init__(self, rank: int, rows: int, message: Optional[str] = None):
        self.rank = rank
        self.rows = rows
        super().__init__(message or f"numerical rank {rank} < {rows} rows")


class SolveError(DomainError):
    """Exception for iterations that stop without a solution."""

    code = "SolveError"


class Diverged(SolveError):
    code = "Diverged"

    def __init__(self, iteration: int, reason: str):
        self.iteration = iteration
        self.reason = reason
        super().__init__(f"diverged at iteration {iteration}: {reason}")


class MaxItersReached(SolveError):
    code = "MaxItersReached"


class PersistenceError(DomainError):
    """Exception for unreadable or malformed input/output files."""

    code = "PersistenceError"


class BadProblemFile(PersistenceError):
    code = "BadProblemFile"


class BadReferenceFile(PersistenceError):
    code = "BadReferenceFile"


class BadSolutionFile(PersistenceError):
    code = "BadSolutionFile"


class BadBenchSpec(PersistenceError):
    code = "BadBenchSpec"
