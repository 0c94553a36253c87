"""Tests for per-trial random streams."""

import numpy as np
import pytest

from src.simulation.rng import chunk_ranges, trial_rng


class TestTrialRng:
    def test_stream_depends_only_on_seed_and_index(self):
        first = trial_rng(5, 17).random(4)
        trial_rng(5, 3).random(100)
        np.testing.assert_array_equal(trial_rng(5, 17).random(4), first)

    def test_streams_differ(self):
        a = trial_rng(5, 0).random(4)
        assert not np.array_equal(a, trial_rng(5, 1).random(4))
        assert not np.array_equal(a, trial_rng(6, 0).random(4))
        assert not np.array_equal(a, trial_rng(5, 0, 64).random(4))

    def test_full_seed_range(self):
        trial_rng(2**64 - 1, 0).random()


class TestChunkRanges:
    @pytest.mark.parametrize("trials,workers", [(10, 1), (10, 3), (3, 8), (1, 1), (100, 7)])
    def test_contiguous_cover(self, trials, workers):
        ranges = chunk_ranges(trials, workers)
        assert ranges[0][0] == 0
        assert ranges[-1][1] == trials
        assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))
        assert len(ranges) == min(trials, workers)
        assert all(stop > start for start, stop in ranges)
