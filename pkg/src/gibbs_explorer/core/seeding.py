"""
Reproducible random streams

Every stream is keyed by (master seed, tag, replicate index) and backed by
the counter-based Philox generator, so replicate i sees the same numbers no
matter which worker runs it or in which order.
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, TypeVar

import numpy as np

T = TypeVar("T")

MAX_SEED = 2 ** 64 - 1
DEFAULT_CHUNKS = 16


def tag_key(tag: str) -> int:
    """Stable 64-bit key for a stream name"""
    return int.from_bytes(hashlib.blake2b(tag.encode("utf-8"), digest_size=8).digest(), "little")


@dataclass(frozen=True)
class SeedRecord:
    master_seed: int
    tag: str
    replicate: int

    def to_dict(self) -> Dict[str, Any]:
        return {"master_seed": self.master_seed, "tag": self.tag, "replicate": self.replicate}


class RandomStreams:
    """Factory of per-replicate generators plus the worker pool that consumes them"""

    def __init__(self, master_seed: int, workers: int = 1):
        if not 0 <= int(master_seed) <= MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {master_seed}")
        if workers < 1:
            raise ValueError(f"worker count must be positive, got {workers}")
        self.master_seed = int(master_seed)
        self.workers = int(workers)

    def generator(self, tag: str, index: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.master_seed, spawn_key=(tag_key(tag), int(index)))
        return np.random.Generator(np.random.Philox(sequence))

    def record(self, tag: str, index: int) -> SeedRecord:
        return SeedRecord(self.master_seed, tag, int(index))

    def map_replicates(
        self, fn: Callable[[int, np.random.Generator], T], count: int, tag: str
    ) -> List[T]:
        """fn(i, rng_i) for i in range(count), ordered by i"""

        def run(index: int) -> T:
            return fn(index, self.generator(tag, index))

        if self.workers == 1 or count < 2:
            return [run(i) for i in range(count)]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(run, range(count)))

    def map_chunks(
        self, fn: Callable[[np.random.Generator, int], np.ndarray], total: int, tag: str,
        chunks: int = DEFAULT_CHUNKS,
    ) -> np.ndarray:
        """
        Draw `total` values as fn(rng_j, size_j) over a fixed number of chunks

        The chunk layout depends on `total` only, never on the worker count.
        """
        chunks = max(1, min(chunks, total))
        sizes = [total // chunks + (1 if j < total % chunks else 0) for j in range(chunks)]
        parts = self.map_replicates(lambda j, rng: np.asarray(fn(rng, sizes[j]), dtype=float), chunks, tag)
        return np.concatenate(parts) if parts else np.empty(0)

    def __repr__(self) -> str:
        return f"RandomStreams(seed={self.master_seed}, workers={self.workers})"
