"""Scenario plug-ins."""

from __future__ import annotations

from typing import Any, Protocol

import numpy as np

from ..models import ScenarioConfig, TrialRecord


class Scenario(Protocol):
    def simulate_trial(self, cfg: ScenarioConfig, trial_index: int, rng: np.random.Generator) -> TrialRecord: ...

    def predictions(self, cfg: ScenarioConfig) -> dict[str, Any]: ...
