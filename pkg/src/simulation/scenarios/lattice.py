"""Modular-momentum equation of motion checked on random cyclic-lattice potentials."""

from __future__ import annotations

from typing import Any

import numpy as np

from ...quantum.hilbert import matrix_exponential
from ...quantum.modular import (
    CyclicLattice,
    LatticePotential,
    modular_commutator_check,
    momentum_op,
    random_potentials,
    translation_op,
)
from ..models import ScenarioConfig, TrialRecord

TOLERANCE = 1e-10


def simulate_trial(cfg: ScenarioConfig, trial_index: int, rng: np.random.Generator) -> TrialRecord:
    lat = CyclicLattice(cfg.sites)
    (potential,) = random_potentials(rng, cfg.sites, 1)
    record = TrialRecord(trial_index=trial_index, postselected=True)
    record.values["deviation"] = modular_commutator_check(lat, potential, cfg.steps)
    return record


def translation_generator_deviation(sites: int, steps: int) -> float:
    """Max entry error between exp(iPℓ) and the permutation translation."""
    lat = CyclicLattice(sites)
    generated = matrix_exponential(momentum_op(lat), 1j * steps * lat.spacing).entries
    return float(np.max(np.abs(generated - translation_op(lat, steps).entries)))


def predictions(cfg: ScenarioConfig) -> dict[str, Any]:
    return {
        "tolerance": TOLERANCE,
        "free_particle_deviation": modular_commutator_check(
            CyclicLattice(cfg.sites), LatticePotential(np.zeros(cfg.sites)), cfg.steps
        ),
        "translation_generator_deviation": translation_generator_deviation(cfg.sites, cfg.steps),
    }
