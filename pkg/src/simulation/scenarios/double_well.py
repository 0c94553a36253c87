"""Double well: preselected |σ_x=+1>, weak σ_z and σ_x pointers, postselected by label."""

from __future__ import annotations

from typing import Any

import numpy as np

from ...quantum.hilbert import SIGMA_X, SIGMA_Z, Ket, inner
from ...quantum.tsvf import TwoStateVector, double_well_tsv
from ..models import ScenarioConfig, TrialRecord
from .common import LABEL_STATES, Observables, pointer_predictions, weak_sequence

OBSERVABLES: Observables = (("sigma_z", SIGMA_Z), ("sigma_x", SIGMA_X))


def _selection(cfg: ScenarioConfig) -> tuple[Ket, Ket]:
    pre = double_well_tsv(cfg.inverted).pre
    return pre, LABEL_STATES[cfg.selection]


def simulate_trial(cfg: ScenarioConfig, trial_index: int, rng: np.random.Generator) -> TrialRecord:
    pre, post = _selection(cfg)
    record = TrialRecord(trial_index=trial_index, postselected=False)
    state, record.flips = weak_sequence(pre, OBSERVABLES, cfg, rng, pre, record.readouts)
    record.postselected = bool(rng.random() < abs(inner(post, state)) ** 2)
    return record


def predictions(cfg: ScenarioConfig) -> dict[str, Any]:
    pre, post = _selection(cfg)
    return pointer_predictions(cfg, TwoStateVector(pre=pre, post=post), OBSERVABLES)
