"""
Storage port interfaces - contracts for reading and writing problems,
solutions and traces without naming a file format.

The domain defines these; adapters/outbound/persistence implements them.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Tuple

import numpy as np

from .entities import ConicProgram, Solution, TraceRecord


class IProblemRepository(ABC):
    """Port for conic program persistence."""

    @abstractmethod
    def load(self, path: Path) -> ConicProgram:
        """
        Read a program.

        Args:
            path: Location of the problem file

        Returns:
            The program, with A dense or CSR as stored

        Raises:
            BadProblemFile: If the file is missing or malformed
        """
        pass

    @abstractmethod
    def save(self, program: ConicProgram, path: Path, sparse: bool = False) -> Path:
        """
        Write a program.

        Args:
            program: The program to store
            path: Destination file
            sparse: Store A as (i, j, v) triplets instead of a dense array

        Returns:
            The path written
        """
        pass

    @abstractmethod
    def load_scaling(self, path: Path) -> np.ndarray:
        """
        Read a fixed positive column scaling, one entry per coordinate.

        Raises:
            BadProblemFile: If the file is missing, malformed or not positive
        """
        pass


class ISolutionRepository(ABC):
    """Port for solution and reference persistence."""

    @abstractmethod
    def load(self, path: Path) -> Solution:
        """
        Raises:
            BadSolutionFile: If the file is missing or malformed
        """
        pass

    @abstractmethod
    def save(self, solution: Solution, path: Path) -> Path:
        pass

    @abstractmethod
    def load_reference(self, path: Path) -> Tuple[np.ndarray, np.ndarray]:
        """
        Read (x_CS, y_CS) from a solution file that carries a multiplier.

        Raises:
            BadReferenceFile: If the file is malformed or y is missing
        """
        pass


class ITraceWriter(ABC):
    """Port for per-iteration trace output."""

    @abstractmethod
    def write(self, records: Iterable[TraceRecord], path: Path,
              metadata: Mapping[str, Any]) -> Path:
        """
        Write the trace and its metadata sidecar.

        Returns:
            The trace path
        """
        pass


class ISummaryWriter(ABC):
    """Port for benchmark summaries."""

    @abstractmethod
    def write(self, rows: Iterable[Dict[str, Any]], path: Path) -> Path:
        pass
