"""Chunked range workers shared by the searches."""

from collections.abc import Callable, Generator, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

from quartic_iso.utils.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def split_range(start: int, stop: int, parts: int) -> list[tuple[int, int]]:
    """Split [start, stop) into at most `parts` contiguous half-open chunks, in order"""
    if stop <= start:
        return []
    parts = max(1, min(parts, stop - start))
    size, extra = divmod(stop - start, parts)
    chunks = []
    lower = start
    for index in range(parts):
        upper = lower + size + (1 if index < extra else 0)
        chunks.append((lower, upper))
        lower = upper
    return chunks


def iter_chunks(fn: Callable[[T], R], chunks: Iterable[T], workers: int = 1) -> Generator[R, None, None]:
    """Yield fn(chunk) for each chunk, in chunk order.

    With workers == 1 everything runs in-process. Otherwise chunks are handed to a process
    pool; fn must be a module-level function. Closing the iterator early cancels chunks that
    have not started.
    """
    if workers <= 1:
        for chunk in chunks:
            yield fn(chunk)
        return

    executor = ProcessPoolExecutor(max_workers=workers)
    logger.debug(f"Started process pool with {workers} workers", extra={"workers": workers})
    try:
        yield from executor.map(fn, chunks)
    finally:
        executor.shutdown(wait=True, cancel_futures=True)


def run_chunks(fn: Callable[[T], R], chunks: Iterable[T], workers: int = 1) -> list[R]:
    """All results of fn over chunks, in chunk order"""
    return list(iter_chunks(fn, chunks, workers))
