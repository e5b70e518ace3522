"""Seed derivation for reproducible experiment streams.

Every random stream is a PCG64 generator seeded by
``SeedSequence(seed, spawn_key=(experiment_id, *keys))``.  The keys identify
the job (signal size, population, repetition, member, ...), so any job can be
regenerated on its own and results do not depend on execution order.
"""

from __future__ import annotations

import numpy as np

EXPERIMENT_IDS = {
    "ar-detect": 1,
    "spheroid": 2,
    "moments": 3,
    "ar-illustration": 4,
}


def derive_rng(seed: int, experiment: str, *keys: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(EXPERIMENT_IDS[experiment], *map(int, keys)))
    return np.random.Generator(np.random.PCG64(ss))
