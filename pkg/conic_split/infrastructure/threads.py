"""
Thread limits for the BLAS/OpenMP pools numpy and scipy run on.

Matvec reductions inside a solve are only reproducible for a fixed thread
count, so every solve runs inside `thread_limit(resolve_threads(...))`.
"""
import logging
from contextlib import contextmanager
from typing import Iterator, Optional

from threadpoolctl import threadpool_info, threadpool_limits

from .config import get_settings

logger = logging.getLogger(__name__)


def resolve_threads(cli_threads: Optional[int] = None) -> Optional[int]:
    """CONIC_SPLIT_THREADS wins over the command-line value."""
    env_threads = get_settings().threads
    return env_threads if env_threads is not None else cli_threads


@contextmanager
def thread_limit(threads: Optional[int]) -> Iterator[Optional[int]]:
    """Cap native thread pools for the duration of the block; None leaves them alone."""
    if threads is None:
        yield None
        return
    if threads < 1:
        raise ValueError("threads must be >= 1")
    with threadpool_limits(limits=threads):
        logger.debug("Thread pools limited", extra={"threads": threads,
                                                     "pools": [p.get("internal_api") for p in threadpool_info()]})
        yield threads
