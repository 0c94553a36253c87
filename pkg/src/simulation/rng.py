"""Per-trial random streams.

Trial k of a run seeded with s draws from
Generator(Philox(SeedSequence(s, spawn_key=(*prefix, k)))), a counter-based
generator keyed only by (seed, prefix, trial index). Results therefore do
not depend on which worker runs a trial or in what order.
"""

from __future__ import annotations

import numpy as np


def trial_rng(seed: int, trial_index: int, *prefix: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(*prefix, trial_index))
    return np.random.Generator(np.random.Philox(sequence))


def chunk_ranges(trials: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, trials) into at most `workers` contiguous, ordered ranges."""
    workers = max(1, min(workers, trials))
    base, extra = divmod(trials, workers)
    ranges = []
    start = 0
    for i in range(workers):
        stop = start + base + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges
