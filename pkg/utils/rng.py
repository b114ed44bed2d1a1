"""
Seeded random number generation.

All randomness flows from explicit integer seeds through numpy's
SeedSequence, so independent streams (chain, bells, replications) can be
split off deterministically.
"""

from typing import List, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Create a PCG64DXSM generator from an integer seed or a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.PCG64DXSM(seed))


def spawn_rngs(seed: SeedLike, count: int) -> List[np.random.Generator]:
    """Split a seed into `count` independent generators (spawn order is stable)."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return [np.random.Generator(np.random.PCG64DXSM(child)) for child in seed.spawn(count)]


def spawn_seeds(seed: SeedLike, count: int) -> List[np.random.SeedSequence]:
    """Split a seed into `count` child SeedSequences."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return seed.spawn(count)
