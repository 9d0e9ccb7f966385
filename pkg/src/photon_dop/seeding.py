"""Deterministic seed derivation for all stochastic routines.

Randomness is never drawn from a shared stream. Samples are grouped in
fixed-size blocks and block ``b`` of purpose ``tag`` under master seed ``s``
gets its own generator, seeded from ``(s, tag, b)``. Sample ``i`` therefore
depends only on ``(s, tag, i)``, and any partition of the sample range that
respects block boundaries reproduces the same numbers bit for bit.
"""
from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, TypeVar

import numpy as np

BLOCK_SIZE = 4096
MAX_SEED = 2**64 - 1

T = TypeVar("T")


def tag_id(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def child_rng(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Generator for ``(master seed, purpose tag, index)``."""
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=(tag_id(tag), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def blocks(n: int, block_size: int = BLOCK_SIZE) -> Iterator[tuple[int, int, int]]:
    """Yield ``(block_index, start, stop)`` covering ``range(n)``."""
    for b, start in enumerate(range(0, n, block_size)):
        yield b, start, min(start + block_size, n)


def map_blocks(
    fn: Callable[[np.random.Generator, int, int], T],
    n: int,
    seed: int,
    tag: str,
    jobs: int = 1,
) -> list[T]:
    """Apply ``fn(rng, start, stop)`` to every block, results in block order.

    ``jobs`` only changes how blocks are scheduled, never their content.
    """
    work = [(child_rng(seed, tag, b), start, stop) for b, start, stop in blocks(n)]
    if jobs <= 1 or len(work) <= 1:
        return [fn(*w) for w in work]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda w: fn(*w), work))
