"""Single and double MZI runs with weak arm pointers at one cut."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np

from ...errors import OrthogonalSelection
from ...quantum.hilbert import ComplexArray, Ket
from ...quantum.interferometer import (
    Network,
    arm_projector,
    build_double_mzi,
    build_single_mzi,
    forward_state,
    leak_probability,
    mzi1_weak_trajectory,
    network_tsv,
    port_probabilities,
    transfer,
)
from ...quantum.tsvf import TwoStateVector
from ..models import ScenarioConfig, TrialRecord
from .common import Observables, complex_pair, pointer_predictions, weak_sequence


def build_network(scenario: str, flux: float) -> Network:
    return build_single_mzi(flux) if scenario == "single_mzi" else build_double_mzi(flux)


def observables(net: Network, cut: str) -> Observables:
    return tuple((arm, arm_projector(net, arm)) for arm in net.cut(cut).arms)


@dataclass(frozen=True, eq=False)
class _Setup:
    pre: Ket
    observables: Observables
    to_output: ComplexArray
    port_mode: int


@lru_cache(maxsize=32)
def _setup(scenario: str, flux: float, cut: str, port: str) -> _Setup:
    net = build_network(scenario, flux)
    return _Setup(
        pre=forward_state(net, cut),
        observables=observables(net, cut),
        to_output=transfer(net, cut, net.output_cut.name).entries,
        port_mode=net.modes[port],
    )


def simulate_trial(cfg: ScenarioConfig, trial_index: int, rng: np.random.Generator) -> TrialRecord:
    setup = _setup(cfg.scenario, cfg.flux, cfg.measurement_cut, cfg.selection)
    record = TrialRecord(trial_index=trial_index, postselected=False)
    state, record.flips = weak_sequence(setup.pre, setup.observables, cfg, rng, setup.pre, record.readouts)
    amplitude = (setup.to_output @ state.amps)[setup.port_mode]
    record.postselected = bool(rng.random() < abs(amplitude) ** 2)
    return record


def predictions(cfg: ScenarioConfig) -> dict[str, Any]:
    net = build_network(cfg.scenario, cfg.flux)
    cut = cfg.measurement_cut
    obs = observables(net, cut)
    probabilities = port_probabilities(net)
    tsv = network_tsv(net, cut, cfg.selection)
    result = pointer_predictions(cfg, tsv, obs)
    result["network"] = net.to_dict()
    result["port_probabilities"] = probabilities
    if cfg.scenario == "double_mzi":
        result.update(_double_mzi_predictions(cfg, net, tsv))
    return result


def _double_mzi_predictions(cfg: ScenarioConfig, net: Network, tsv: TwoStateVector) -> dict[str, Any]:
    forward = forward_state(net, "mid2")
    l2 = float(abs(forward.amps[net.modes["L2"]]) ** 2)
    try:
        trajectory: dict[str, list[float]] | None = dict(
            zip(("L1", "R1"), map(complex_pair, mzi1_weak_trajectory(cfg.flux, cfg.selection)), strict=True)
        )
    except OrthogonalSelection:
        trajectory = None
    return {
        "forward_l2_probability": l2,
        "mzi1_weak_trajectory": trajectory,
        "leak_probability": leak_probability(net, cfg.g0, cfg.delta, cfg.repetitions_per_trial),
        "postselected_state_at_cut": [complex_pair(complex(a)) for a in tsv.post.amps],
    }
