"""Tests for two-state vectors and weak values."""

import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.errors import DimMismatch, NonUnitary, OrthogonalSelection
from src.quantum.hilbert import (
    IDENTITY_2,
    KET_L,
    KET_R,
    KET_X_MINUS,
    KET_X_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Ket,
    LinOp,
    expectation,
    identity,
    inner,
    lin_comb,
    make_ket,
    projector,
    qubit_state,
)
from src.quantum.tsvf import (
    TwoStateVector,
    double_well_tsv,
    make_tsv,
    postselect_probability,
    strong_expectation,
    weak_value,
    weak_value_table,
)


class TestWeakValue:
    @pytest.mark.parametrize("inverted", [False, True])
    def test_double_well_both_properties_definite(self, inverted):
        tsv = double_well_tsv(inverted)
        assert abs(weak_value(tsv, SIGMA_X) - 1.0) <= 1e-12
        assert abs(weak_value(tsv, SIGMA_Z) - 1.0) <= 1e-12

    def test_identity_weak_value_is_one(self):
        tsv = TwoStateVector(pre=make_ket([1, 2j]), post=make_ket([3, 1]))
        assert weak_value(tsv, IDENTITY_2) == pytest.approx(1.0)

    def test_orthogonal_selection(self):
        with pytest.raises(OrthogonalSelection):
            weak_value(TwoStateVector(pre=KET_L, post=KET_R), SIGMA_X)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            weak_value(double_well_tsv(), identity(3))
        with pytest.raises(DimMismatch):
            TwoStateVector(pre=KET_L, post=make_ket([1, 0, 0]))

    def test_weak_value_outside_spectrum(self):
        a, b = math.pi / 4, -(math.pi / 4 - 0.1)
        tsv = TwoStateVector(pre=make_ket([math.cos(a), math.sin(a)]), post=make_ket([math.cos(b), math.sin(b)]))
        value = weak_value(tsv, SIGMA_Z)
        assert value.real == pytest.approx(-math.cos(a + b) / math.cos(a - b))
        assert abs(value.real) > 1

    @given(
        theta=st.floats(min_value=0.0, max_value=math.pi, allow_nan=False),
        phi=st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False),
    )
    def test_post_equal_pre_gives_expectation(self, theta, phi):
        state = qubit_state(theta, phi)
        tsv = TwoStateVector(pre=state, post=state)
        for op in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            assert weak_value(tsv, op) == pytest.approx(strong_expectation(tsv, op), abs=1e-12)

    def test_table(self):
        table = weak_value_table(double_well_tsv(), {"x": SIGMA_X, "z": SIGMA_Z})
        assert set(table) == {"x", "z"}
        assert table["x"] == pytest.approx(1.0)


class TestMakeTsv:
    def test_evolves_both_ends_to_cut(self):
        flip = SIGMA_X
        tsv = make_tsv(KET_L, flip, KET_L, flip)
        np.testing.assert_allclose(tsv.pre.amps, KET_R.amps)
        np.testing.assert_allclose(tsv.post.amps, KET_R.amps)
        assert tsv.overlap == pytest.approx(1.0)

    def test_rejects_non_unitary(self):
        with pytest.raises(NonUnitary):
            make_tsv(KET_L, LinOp(np.array([[1, 1], [0, 1]])), KET_R, IDENTITY_2)


class TestPostselectProbability:
    def test_born_rule(self):
        assert postselect_probability(KET_X_PLUS, IDENTITY_2, KET_R) == pytest.approx(0.5)
        assert postselect_probability(KET_L, SIGMA_X, KET_R) == pytest.approx(1.0)

    def test_rejects_non_unitary(self):
        with pytest.raises(NonUnitary):
            postselect_probability(KET_L, LinOp(2 * np.eye(2)), KET_R)

    def test_strong_expectation_uses_preselection(self):
        assert strong_expectation(double_well_tsv(), SIGMA_Z) == pytest.approx(expectation(SIGMA_Z, KET_X_PLUS))


polar = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)
azimuth = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
coefficients = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


@st.composite
def selections(draw):
    """Pre/post pairs with |<post|pre>| bounded away from zero."""
    pre = qubit_state(draw(polar), draw(azimuth))
    post = qubit_state(draw(polar), draw(azimuth))
    assume(abs(inner(post, pre)) > 0.1)
    return TwoStateVector(pre=pre, post=post)


class TestWeakValueAlgebra:
    @given(tsv=selections(), a=coefficients, b=coefficients)
    def test_linear_in_the_observable(self, tsv, a, b):
        combined = weak_value(tsv, lin_comb([(a, SIGMA_X), (b, SIGMA_Z)]))
        expected = a * weak_value(tsv, SIGMA_X) + b * weak_value(tsv, SIGMA_Z)
        assert abs(combined - expected) <= 1e-9 * (1.0 + abs(expected))

    @given(tsv=selections())
    def test_projector_weak_values_sum_to_one(self, tsv):
        for basis in ((KET_L, KET_R), (KET_X_PLUS, KET_X_MINUS)):
            total = sum(weak_value(tsv, projector(ket)) for ket in basis)
            assert total == pytest.approx(1.0, abs=1e-9)

    @given(tsv=selections(), alpha=azimuth, beta=azimuth)
    def test_global_phases_drop_out(self, tsv, alpha, beta):
        rephased = TwoStateVector(
            pre=Ket(np.exp(1j * alpha) * tsv.pre.amps),
            post=Ket(np.exp(1j * beta) * tsv.post.amps),
        )
        for op in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            before = weak_value(tsv, op)
            assert abs(weak_value(rephased, op) - before) <= 1e-9 * (1.0 + abs(before))
