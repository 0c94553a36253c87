"""Kicked double-well qubit: a delta kick on the left well, then a strong σ_x readout."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Any

import numpy as np

from ...quantum.hilbert import KET_X_PLUS, SIGMA_X, SIGMA_Y, SIGMA_Z, Ket, apply, expectation, inner, lin_comb
from ...quantum.modular import heisenberg_evolve, kicked_qubit_evolution
from ...quantum.tsvf import TwoStateVector, double_well_tsv
from ..models import ScenarioConfig, TrialRecord
from .common import LABEL_STATES, Observables, coupled_density, pointer_predictions, weak_sequence

OBSERVABLES: Observables = (("sigma_x", SIGMA_X),)


@lru_cache(maxsize=32)
def _kicked(v0: float, inverted: bool) -> tuple[Ket, Ket]:
    pre = double_well_tsv(inverted).pre
    return pre, apply(kicked_qubit_evolution(v0), pre)


def _prepared(cfg: ScenarioConfig) -> tuple[Ket, Ket]:
    """Preselected state before and after the kick."""
    return _kicked(cfg.v0, cfg.inverted)


def simulate_trial(cfg: ScenarioConfig, trial_index: int, rng: np.random.Generator) -> TrialRecord:
    """Every trial ends in a σ_x readout; postselection keeps the configured outcome."""
    _, kicked = _prepared(cfg)
    record = TrialRecord(trial_index=trial_index, postselected=False)
    state, record.flips = weak_sequence(kicked, OBSERVABLES, cfg, rng, kicked, record.readouts)
    plus = rng.random() < abs(inner(KET_X_PLUS, state)) ** 2
    record.values["outcome"] = 1.0 if plus else -1.0
    record.postselected = ("x+" if plus else "x-") == cfg.selection
    return record


def heisenberg_deviation(v0: float) -> float:
    """Max entry error of U†σ_xU against cos V0·σ_x + sin V0·σ_y."""
    evolved = heisenberg_evolve(SIGMA_X, kicked_qubit_evolution(v0)).entries
    expected = lin_comb([(math.cos(v0), SIGMA_X), (math.sin(v0), SIGMA_Y)]).entries
    return float(np.max(np.abs(evolved - expected)))


def sigma_z_deviation(v0: float) -> float:
    """Max entry error of U†σ_zU against σ_z; the kick is diagonal in position."""
    evolved = heisenberg_evolve(SIGMA_Z, kicked_qubit_evolution(v0)).entries
    return float(np.max(np.abs(evolved - SIGMA_Z.entries)))


def predictions(cfg: ScenarioConfig) -> dict[str, Any]:
    pre, kicked = _prepared(cfg)
    tsv = TwoStateVector(pre=kicked, post=LABEL_STATES[cfg.selection])
    result = pointer_predictions(cfg, tsv, OBSERVABLES)
    rho = coupled_density(kicked, OBSERVABLES, cfg)
    result["kick"] = {
        "v0": cfg.v0,
        "sigma_x_before": expectation(SIGMA_X, pre).real,
        "sigma_x_after": expectation(SIGMA_X, kicked).real,
        "sigma_z_after": expectation(SIGMA_Z, kicked).real,
        "outcome_mean": float(np.real(np.trace(SIGMA_X.entries @ rho))),
        "heisenberg_deviation": heisenberg_deviation(cfg.v0),
        "sigma_z_deviation": sigma_z_deviation(cfg.v0),
    }
    return result
