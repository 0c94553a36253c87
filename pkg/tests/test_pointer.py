"""Tests for Gaussian pointer coupling, readout and back-action."""

import math

import numpy as np
import pytest
from scipy import integrate

from src.errors import DimMismatch, NonHermitian, NonPositiveDelta, OrthogonalSelection, OutOfRegime
from src.quantum.hilbert import (
    IDENTITY_2,
    KET_L,
    KET_R,
    KET_X_MINUS,
    KET_X_PLUS,
    SIGMA_X,
    SIGMA_Z,
    LinOp,
    inner,
    make_ket,
    projector,
)
from src.quantum.pointer import (
    GaussianPointer,
    conditional_pointer_mean,
    conditional_pointer_variance,
    couple,
    dephase,
    fidelity,
    first_order_state,
    flip_probability,
    flip_probability_quadrature,
    marginal_density,
    postselection_probability,
    readout,
    readout_batch,
    reduced_density_matrix,
)


def closed_form_flip(g0, delta):
    return (1.0 - math.exp(-(g0**2) / (2.0 * delta**2))) / 2.0


class TestGaussianPointer:
    def test_rejects_non_positive_width(self):
        with pytest.raises(NonPositiveDelta):
            GaussianPointer(0.0)

    def test_density_is_normalized(self):
        ptr = GaussianPointer(0.7, center=1.5)
        value, _ = integrate.quad(lambda q: float(ptr.density(q)), -20, 20)
        assert value == pytest.approx(1.0, abs=1e-10)


class TestCouple:
    def test_sigma_z_branches(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.1, GaussianPointer(1.0))
        np.testing.assert_allclose(st.shifts, [-0.1, 0.1])
        np.testing.assert_allclose(st.weights, [0.5, 0.5])

    def test_eigenstate_gives_single_branch(self):
        st = couple(KET_X_PLUS, SIGMA_X, 0.3, GaussianPointer(1.0))
        assert len(st.branches) == 1
        assert st.shifts[0] == pytest.approx(0.3)

    def test_degenerate_eigenvalues_grouped(self):
        st = couple(make_ket([1, 2j]), IDENTITY_2, 0.2, GaussianPointer(1.0))
        assert len(st.branches) == 1

    def test_projector_shifts_zero_and_g0(self):
        st = couple(KET_X_PLUS, projector(KET_L), 0.1, GaussianPointer(1.0))
        assert sorted(st.shifts) == pytest.approx([0.0, 0.1])

    def test_errors(self):
        ptr = GaussianPointer(1.0)
        with pytest.raises(NonHermitian):
            couple(KET_L, LinOp(np.array([[0, 1], [0, 0]])), 0.1, ptr)
        with pytest.raises(DimMismatch):
            couple(make_ket([1, 0, 0]), SIGMA_Z, 0.1, ptr)


class TestReadout:
    def test_back_action_first_order(self):
        g0, delta = 0.05, 1.0
        st = couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(delta))
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(1000):
            record = readout(st, rng)
            if abs(record.q0) > delta or abs(record.q0) < 1e-6:
                continue
            ratio = inner(KET_X_MINUS, record.post_system) / inner(KET_X_PLUS, record.post_system)
            expected = -g0 * record.q0 / (2.0 * delta**2)
            assert abs(ratio - expected) <= 0.01 * abs(expected)
            checked += 1
        assert checked > 500

    def test_record_fields(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.1, GaussianPointer(1.0))
        record = readout(st, np.random.default_rng(0))
        assert record.post_system.norm == pytest.approx(1.0)
        assert 0.0 <= record.flip_weight <= 1.0
        assert record.flipped == (record.flip_weight > 0.5)

    def test_batch_flip_rate_matches_exact(self):
        g0, delta = 0.1, 1.0
        st = couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(delta))
        rng = np.random.default_rng(2024)
        n = 1_000_000
        batch = readout_batch(st, rng, n)
        rate = float(np.mean(rng.random(n) < batch.flip_weights))
        stderr = math.sqrt(rate * (1 - rate) / n)
        assert abs(rate - flip_probability(g0, delta)) <= 3 * stderr

    def test_batch_readings_follow_marginal(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.5, GaussianPointer(1.0))
        batch = readout_batch(st, np.random.default_rng(3), 200_000)
        assert np.mean(batch.q0) == pytest.approx(0.0, abs=0.01)
        assert np.var(batch.q0) == pytest.approx(1.0 + 0.25, abs=0.02)

    def test_averaged_back_action_is_reduced_density(self):
        st = couple(make_ket([1, 2j]), SIGMA_Z, 0.8, GaussianPointer(1.0))
        n = 200_000
        states = readout_batch(st, np.random.default_rng(11), n).post_states
        outer = states[:, :, None] * states.conj()[:, None, :]
        mean = outer.mean(axis=0)
        stderr = outer.std(axis=0) / math.sqrt(n)
        assert np.all(np.abs(mean - reduced_density_matrix(st)) <= 4 * stderr + 1e-12)

    def test_same_seed_same_readout(self):
        st = couple(make_ket([1, 1j]), SIGMA_Z, 0.3, GaussianPointer(1.0))
        first, second = (readout(st, np.random.default_rng(5)) for _ in range(2))
        assert first.q0 == second.q0
        np.testing.assert_array_equal(first.post_system.amps, second.post_system.amps)
        batches = [readout_batch(st, np.random.default_rng(5), 64) for _ in range(2)]
        np.testing.assert_array_equal(batches[0].q0, batches[1].q0)
        np.testing.assert_array_equal(batches[0].post_states, batches[1].post_states)


class TestFlipProbability:
    @pytest.mark.parametrize("ratio", [0.01, 0.05, 0.1, 0.3, 1.0])
    def test_bounded_by_coupling_ratio(self, ratio):
        p = flip_probability(ratio, 1.0)
        assert p <= ratio**2
        assert p == pytest.approx(closed_form_flip(ratio, 1.0), rel=1e-10)

    @pytest.mark.parametrize("g0,delta", [(0.1, 1.0), (0.5, 2.0), (1.0, 1.0)])
    def test_quadrature_agrees(self, g0, delta):
        assert flip_probability_quadrature(g0, delta) == pytest.approx(flip_probability(g0, delta), abs=1e-9)

    def test_quadratic_scaling(self):
        g0 = np.geomspace(0.01, 0.1, 8)
        p = [flip_probability(g, 1.0) for g in g0]
        slope = np.polyfit(np.log(g0), np.log(p), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.05)

    def test_non_positive_width(self):
        with pytest.raises(NonPositiveDelta):
            flip_probability(0.1, 0.0)


class TestFirstOrder:
    def test_fidelity_deficit_is_fourth_order(self):
        ratios = np.array([0.2, 0.1, 0.05])
        deficits = []
        for g0 in ratios:
            ptr = GaussianPointer(1.0)
            exact = couple(KET_X_PLUS, SIGMA_Z, g0, ptr)
            deficits.append(1.0 - fidelity(exact, first_order_state(KET_X_PLUS, g0, ptr)))
        slope = np.polyfit(np.log(ratios), np.log(deficits), 1)[0]
        assert slope == pytest.approx(4.0, abs=0.3)

    def test_deficit_closed_form(self):
        g0 = 0.2
        ptr = GaussianPointer(1.0)
        x = g0**2 / 4.0
        value = fidelity(couple(KET_X_PLUS, SIGMA_Z, g0, ptr), first_order_state(KET_X_PLUS, g0, ptr))
        assert value == pytest.approx(math.exp(-x) * (1 + x), rel=1e-12)

    def test_coefficient_sign(self):
        state = first_order_state(KET_X_PLUS, 0.1, GaussianPointer(2.0))
        assert state.correction_coefficient == pytest.approx(-0.1 / 8.0)

    def test_out_of_regime(self):
        with pytest.raises(OutOfRegime):
            first_order_state(KET_X_PLUS, 1.0, GaussianPointer(1.0))

    def test_requires_sigma_x_plus(self):
        with pytest.raises(ValueError):
            first_order_state(KET_L, 0.1, GaussianPointer(1.0))


class TestDensities:
    def test_reduced_density_matrix(self):
        g0 = 0.4
        rho = reduced_density_matrix(couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(1.0)))
        assert np.trace(rho).real == pytest.approx(1.0)
        np.testing.assert_allclose(rho, rho.conj().T)
        assert rho[0, 1].real == pytest.approx(0.5 * math.exp(-(g0**2) / 2.0))

    def test_dephase_matches_reduced_density_matrix(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.4, GaussianPointer(1.3))
        rho0 = np.outer(KET_X_PLUS.amps, KET_X_PLUS.amps.conj())
        np.testing.assert_allclose(dephase(rho0, SIGMA_Z, 0.4, 1.3), reduced_density_matrix(st), atol=1e-14)

    def test_dephase_without_coupling_is_identity(self):
        rho0 = np.outer(KET_X_PLUS.amps, KET_X_PLUS.amps.conj())
        np.testing.assert_allclose(dephase(rho0, SIGMA_Z, 0.0, 1.0), rho0)

    def test_marginal_density_normalized(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.8, GaussianPointer(1.0))
        value, _ = integrate.quad(lambda q: float(marginal_density(st, q)), -20, 20)
        assert value == pytest.approx(1.0, abs=1e-10)


class TestConditionalPointer:
    def test_selected_branch_shift(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.1, GaussianPointer(1.0))
        assert conditional_pointer_mean(st, KET_R) == pytest.approx(0.1)
        assert conditional_pointer_variance(st, KET_R) == pytest.approx(1.0)

    def test_no_coupling_no_shift(self):
        st = couple(KET_X_PLUS, SIGMA_Z, 0.0, GaussianPointer(1.0))
        assert conditional_pointer_mean(st, make_ket([1, 1j])) == pytest.approx(0.0)

    def test_postselection_probability(self):
        g0 = 0.3
        st = couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(1.0))
        assert postselection_probability(st, KET_X_PLUS) == pytest.approx(0.5 * (1 + math.exp(-(g0**2) / 2)))
        assert postselection_probability(st, KET_X_MINUS) == pytest.approx(flip_probability(g0, 1.0))

    def test_orthogonal_selection(self):
        st = couple(KET_R, SIGMA_Z, 0.1, GaussianPointer(1.0))
        with pytest.raises(OrthogonalSelection):
            conditional_pointer_mean(st, KET_L)
