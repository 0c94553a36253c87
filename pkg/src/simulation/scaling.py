"""Survival of the preselected state under an ensemble of N weak readouts.

For each N the pointer width is Δ = √N. Each trial sends N fresh |σ_x=+1>
electrons through one σ_z coupling and readout each, and a strong σ_x
check after every readout decides whether that electron flipped. A trial
survives when none of its N electrons flipped, so the exact survival
probability is (1 - p)^N with p = flip_probability(g0, √N). As N grows it
approaches exp(-g0²/4), which lies above the exp(-g0²) bound.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from typing import Any

from ..errors import ConfigInvalid
from ..logging_config import get_logger
from ..quantum.hilbert import KET_X_PLUS, SIGMA_Z
from ..quantum.pointer import GaussianPointer, couple, flip_probability, readout_batch
from .models import Estimate
from .rng import trial_rng

logger = get_logger(__name__)


@dataclass(frozen=True)
class ScalingRow:
    n: int
    delta: float
    flip_probability: float
    empirical_no_flip: Estimate
    analytic_no_flip: float
    reference: float
    limit: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def survival_limit(g0: float) -> float:
    """Large-N limit of (1 - flip_probability(g0, √N))^N."""
    return math.exp(-(g0**2) / 4.0)


def survival_scaling(g0: float, n_values: Sequence[int], trials: int, seed: int = 0) -> list[ScalingRow]:
    """Empirical and exact no-flip fractions for each ensemble size N.

    Raises:
        ConfigInvalid: g0 above 1 or not finite, N values not positive and
            strictly ascending, or trials below 1.
    """
    if not (math.isfinite(g0) and abs(g0) <= 1.0):
        raise ConfigInvalid("g0", "survival scaling needs |g0| <= 1")
    if not n_values or any(n < 1 for n in n_values):
        raise ConfigInvalid("n", "ensemble sizes must be positive")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigInvalid("n", "ensemble sizes must be strictly ascending")
    if trials < 1:
        raise ConfigInvalid("trials", "must be at least 1")

    reference = math.exp(-(g0**2))
    rows = []
    for n in n_values:
        delta = math.sqrt(n)
        p = flip_probability(g0, delta)
        coupled = couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(delta))
        survived = 0
        for t in range(trials):
            rng = trial_rng(seed, t, n)
            batch = readout_batch(coupled, rng, n)
            if not (rng.random(n) < batch.flip_weights).any():
                survived += 1
        row = ScalingRow(
            n=n,
            delta=delta,
            flip_probability=p,
            empirical_no_flip=Estimate.from_bernoulli(survived, trials),
            analytic_no_flip=(1.0 - p) ** n,
            reference=reference,
            limit=survival_limit(g0),
        )
        logger.info("N=%d: empirical %.4f, analytic %.4f", n, row.empirical_no_flip.value, row.analytic_no_flip)
        rows.append(row)
    return rows
