"""Pieces shared by the scenario plug-ins."""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from ...errors import OrthogonalSelection
from ...quantum.hilbert import KET_L, KET_R, KET_X_MINUS, KET_X_PLUS, ComplexArray, Ket, LinOp, identity, inner
from ...quantum.pointer import (
    GaussianPointer,
    conditional_pointer_mean,
    couple,
    dephase,
    readout,
)
from ...quantum.tsvf import TwoStateVector, postselect_probability, weak_value
from ..models import Readout, ScenarioConfig

LABEL_STATES: dict[str, Ket] = {"L": KET_L, "R": KET_R, "x+": KET_X_PLUS, "x-": KET_X_MINUS}
LABEL_EIGENVALUES: dict[str, int] = {"L": -1, "R": 1, "x+": 1, "x-": -1}

Observables = Sequence[tuple[str, LinOp]]


def weak_sequence(
    state: Ket,
    observables: Observables,
    cfg: ScenarioConfig,
    rng: np.random.Generator,
    reference: Ket,
    readouts: list[Readout],
) -> tuple[Ket, int]:
    """Run the configured repetitions of weak couplings and readouts.

    After each repetition a strong check against `reference` is simulated
    (Bernoulli with the flip weight) for flip counting; it does not collapse
    the state.

    Returns:
        The back-acted system state and the number of flips.
    """
    ptr = GaussianPointer(cfg.delta)
    cut = cfg.measurement_cut
    flips = 0
    for _ in range(cfg.repetitions_per_trial):
        for name, op in observables:
            record = readout(couple(state, op, cfg.g0, ptr), rng)
            readouts.append(Readout(cut, name, record.q0))
            state = record.post_system
        flip_weight = 1.0 - abs(inner(reference, state)) ** 2
        if rng.random() < flip_weight:
            flips += 1
    return state, flips


def _dephase_repetition(rho: ComplexArray, observables: Observables, g0: float, delta: float) -> ComplexArray:
    for _, op in observables:
        rho = dephase(rho, op, g0, delta)
    return rho


def coupled_density(pre: Ket, observables: Observables, cfg: ScenarioConfig) -> ComplexArray:
    """Readout-averaged system state after every repetition of couplings.

    Averaging the readout back-action over pointer outcomes gives the
    dephasing channel, so this is the state the final strong measurement sees.
    """
    unit = pre.normalized().amps
    rho = np.outer(unit, unit.conj())
    for _ in range(cfg.repetitions_per_trial):
        rho = _dephase_repetition(rho, observables, cfg.g0, cfg.delta)
    return rho


def selection_weight(rho: ComplexArray, post: Ket) -> float:
    unit = post.normalized().amps
    return float(np.real(np.vdot(unit, rho @ unit)))


def exact_flip_probability(pre: Ket, observables: Observables, g0: float, delta: float) -> float:
    """Probability that one repetition of unread couplings leaves `pre`."""
    unit = pre.normalized().amps
    rho = _dephase_repetition(np.outer(unit, unit.conj()), observables, g0, delta)
    return 1.0 - selection_weight(rho, pre)


def complex_pair(value: complex) -> list[float]:
    return [value.real, value.imag]


def pointer_predictions(
    cfg: ScenarioConfig,
    tsv: TwoStateVector,
    observables: Observables,
) -> dict[str, Any]:
    """Weak-value predictions for pointer means, totals, flips and postselection.

    `postselection_probability` includes the dephasing of every coupling;
    `uncoupled_postselection_probability` is |<post|pre>|^2.
    """
    ptr = GaussianPointer(cfg.delta)
    n = cfg.repetitions_per_trial
    weak: dict[str, list[float] | None] = {}
    means: dict[str, float | None] = {}
    totals: dict[str, float | None] = {}
    exact: dict[str, float | None] = {}
    for name, op in observables:
        try:
            w = weak_value(tsv, op)
        except OrthogonalSelection:
            weak[name] = means[name] = totals[name] = None
        else:
            weak[name] = complex_pair(w)
            means[name] = cfg.g0 * w.real
            totals[name] = n * cfg.g0 * w.real
        try:
            exact[name] = conditional_pointer_mean(couple(tsv.pre, op, cfg.g0, ptr), tsv.post)
        except OrthogonalSelection:
            exact[name] = None

    flip = exact_flip_probability(tsv.pre, observables, cfg.g0, cfg.delta)
    return {
        "observables": [name for name, _ in observables],
        "weak_values": weak,
        "pointer_means": means,
        "single_coupling_means": exact,
        "accumulated_shift": totals,
        "postselection_probability": selection_weight(coupled_density(tsv.pre, observables, cfg), tsv.post),
        "uncoupled_postselection_probability": postselect_probability(tsv.pre, identity(tsv.dim), tsv.post),
        "flip_probability": flip,
        "independent_no_flip_probability": (1.0 - flip) ** n,
        "survival_reference": math.exp(-(cfg.g0**2)),
    }
