"""Tests for no-flip survival scaling."""

import math

import pytest

from src.errors import ConfigInvalid
from src.quantum.pointer import flip_probability
from src.simulation.scaling import survival_limit, survival_scaling


class TestSurvivalScaling:
    def test_no_coupling_never_flips(self):
        rows = survival_scaling(0.0, [4, 16], trials=50)
        for row in rows:
            assert row.empirical_no_flip.value == 1.0
            assert row.analytic_no_flip == 1.0
            assert row.reference == 1.0

    def test_delta_tracks_ensemble_size(self):
        row = survival_scaling(0.5, [64], trials=1)[0]
        assert row.delta == 8.0
        assert row.flip_probability == pytest.approx(flip_probability(0.5, 8.0))
        assert row.analytic_no_flip == pytest.approx((1.0 - row.flip_probability) ** 64)

    @pytest.mark.parametrize("g0", [0.25, 0.5])
    def test_analytic_product_converges_above_bound(self, g0):
        rows = survival_scaling(g0, [16, 64, 256, 1024], trials=1)
        analytic = [row.analytic_no_flip for row in rows]
        assert analytic == sorted(analytic, reverse=True)
        assert abs(analytic[-1] - analytic[-2]) / analytic[-2] < 0.01
        assert all(math.exp(-(g0**2)) <= a <= 1.0 for a in analytic)
        assert analytic[-1] == pytest.approx(survival_limit(g0), rel=1e-3)

    def test_empirical_matches_exact_product(self):
        row = survival_scaling(0.5, [64], trials=4000, seed=17)[0]
        assert row.empirical_no_flip.within(row.analytic_no_flip)

    def test_deterministic(self):
        first = survival_scaling(0.5, [16], trials=200, seed=3)
        second = survival_scaling(0.5, [16], trials=200, seed=3)
        assert first == second

    @pytest.mark.parametrize(
        "g0,n_values,trials",
        [(1.5, [16], 10), (0.5, [64, 16], 10), (0.5, [16, 16], 10), (0.5, [0, 4], 10), (0.5, [], 10), (0.5, [4], 0)],
    )
    def test_invalid_arguments(self, g0, n_values, trials):
        with pytest.raises(ConfigInvalid):
            survival_scaling(g0, n_values, trials)
