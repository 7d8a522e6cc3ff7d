"""Seeded, counter-based random streams.

Every Monte-Carlo routine takes an :class:`RngSeed`.  Sample ``i`` of a loop
draws from ``seed.child(i)``, so results never depend on how work is split
between workers.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")

_MASK64 = (1 << 64) - 1
DEFAULT_MASTER = 20240917
SEED_ENV_VAR = "SCRAMBLE_LAB_SEED"


@dataclass(frozen=True)
class RngSeed:
    master: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= self.master <= _MASK64 and 0 <= self.stream <= _MASK64):
            raise ValueError("master and stream must be unsigned 64-bit integers")

    def generator(self) -> np.random.Generator:
        # Philox is a counter-based bit generator; the key is derived from both words.
        ss = np.random.SeedSequence(entropy=self.master, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> "RngSeed":
        """Derived sub-stream, independent of sibling children."""
        ss = np.random.SeedSequence(entropy=(self.stream, int(index), 0x5EED))
        return RngSeed(self.master, int(ss.generate_state(1, np.uint64)[0]))

    def children(self, n: int) -> list["RngSeed"]:
        return [self.child(i) for i in range(n)]

    @classmethod
    def coerce(cls, seed: "RngSeed | int | None") -> "RngSeed":
        if isinstance(seed, RngSeed):
            return seed
        if seed is None:
            return default_seed()
        return cls(int(seed) & _MASK64)


def default_seed() -> RngSeed:
    value = os.environ.get(SEED_ENV_VAR)
    return RngSeed(int(value) if value else DEFAULT_MASTER)


_WORKERS = 1


def set_workers(n: int) -> None:
    """Bound the thread pool used by :func:`map_streams`; results are unaffected."""
    global _WORKERS
    _WORKERS = max(1, int(n))


def map_streams(fn: Callable[[RngSeed], T], seed: RngSeed, n: int,
                workers: int | None = None) -> list[T]:
    """Evaluate ``fn(seed.child(i))`` for ``i < n``, preserving order."""
    seeds = seed.children(n)
    workers = _WORKERS if workers is None else workers
    if workers <= 1 or n < 2:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))

