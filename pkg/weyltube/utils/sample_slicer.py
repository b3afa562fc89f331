"""Sample slicing utilities for deterministic chunked Monte Carlo runs."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import structlog

from ..config.constants import DEFAULT_MC_CHUNK_SIZE

logger = structlog.get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class SampleChunk:
    """One slice of a Monte Carlo run with its own child seed."""

    index: int
    start: int
    stop: int
    seed: np.random.SeedSequence

    @property
    def size(self) -> int:
        return self.stop - self.start

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def slice_sample_range(total: int, max_chunk: int = DEFAULT_MC_CHUNK_SIZE) -> List[Tuple[int, int]]:
    """
    Split ``range(total)`` into consecutive chunks of at most ``max_chunk`` samples.

    Args:
        total: Number of samples
        max_chunk: Maximum samples allowed per chunk

    Returns:
        List of (start, stop) tuples

    Example:
        >>> slice_sample_range(10, 4)
        [(0, 4), (4, 8), (8, 10)]
    """
    if total <= 0:
        raise ValueError("total must be positive")
    if max_chunk <= 0:
        raise ValueError("max_chunk must be positive")

    chunks = []
    current = 0
    while current < total:
        stop = min(current + max_chunk, total)
        chunks.append((current, stop))
        current = stop

    logger.debug("Sample range sliced", total=total, max_chunk=max_chunk, chunks=len(chunks))
    return chunks


def sample_chunks(total: int, seed: int, max_chunk: int = DEFAULT_MC_CHUNK_SIZE) -> List[SampleChunk]:
    """
    Slice ``total`` samples and attach independent child seeds.

    The child seeds come from ``SeedSequence(seed).spawn``, so the draw is
    fixed by ``(seed, max_chunk)`` regardless of how many workers run it.
    """
    ranges = slice_sample_range(total, max_chunk)
    children = np.random.SeedSequence(seed).spawn(len(ranges))
    return [
        SampleChunk(index=i, start=start, stop=stop, seed=child)
        for i, ((start, stop), child) in enumerate(zip(ranges, children))
    ]


def map_chunks(
    worker: Callable[[T], R],
    chunks: Sequence[T],
    threads: Optional[int] = None,
) -> List[R]:
    """Run ``worker`` on each chunk (or any work item), preserving order in the result."""
    if threads is None or threads <= 1 or len(chunks) <= 1:
        return [worker(chunk) for chunk in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, chunks))
