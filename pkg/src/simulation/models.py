"""Data models for scenario runs."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field, fields
from typing import Any

from ..errors import ConfigInvalid

SCENARIOS = ("double_well", "single_mzi", "double_mzi", "kicked_qubit", "lattice_check")
SELECTIVE_SCENARIOS = ("double_well", "single_mzi", "double_mzi", "kicked_qubit")
OUTPUTS = (
    "postselection",
    "pointer_means",
    "accumulated_shift",
    "flips",
    "weak_values",
    "kick",
    "lattice",
)
PORT_LABELS = ("L", "R")
STATE_LABELS = ("L", "R", "x+", "x-")
KICK_LABELS = ("x+", "x-")
DEFAULT_POSTSELECT = {
    "double_well": "R",
    "single_mzi": "R",
    "double_mzi": "R",
    "kicked_qubit": "x-",
    "lattice_check": "",
}
DEFAULT_CUTS = {
    "double_well": "intermediate",
    "single_mzi": "mid",
    "double_mzi": "mid1",
    "kicked_qubit": "after_kick",
    "lattice_check": "lattice",
}
MAX_SEED = 2**64 - 1


def _selection_labels(scenario: str) -> tuple[str, ...]:
    if scenario in ("single_mzi", "double_mzi"):
        return PORT_LABELS
    if scenario == "kicked_qubit":
        return KICK_LABELS
    return STATE_LABELS


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation request. Defaults match config.yaml."""

    scenario: str
    g0: float = 0.1
    delta: float = 1.0
    flux: float = 0.0
    trials: int = 10000
    repetitions_per_trial: int = 1
    seed: int = 0
    postselect: str = ""
    outputs: tuple[str, ...] = ()
    v0: float = math.pi
    sites: int = 32
    steps: int = 1
    workers: int = 1
    cut: str = ""
    inverted: bool = False

    @property
    def measurement_cut(self) -> str:
        return self.cut or DEFAULT_CUTS[self.scenario]

    @property
    def selection(self) -> str:
        """Postselected label; the kicked qubit reads σ_x, the others default to R."""
        return self.postselect or DEFAULT_POSTSELECT[self.scenario]

    def wants(self, section: str) -> bool:
        return not self.outputs or section in self.outputs

    def validate(self) -> ScenarioConfig:
        """Return self, or raise ConfigInvalid naming the first bad field."""
        if self.scenario not in SCENARIOS:
            raise ConfigInvalid("scenario", f"must be one of {', '.join(SCENARIOS)}")
        for name in ("g0", "delta", "flux", "v0"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigInvalid(name, "must be finite")
        if not self.delta > 0:
            raise ConfigInvalid("delta", "must be positive")
        if self.trials < 1:
            raise ConfigInvalid("trials", "must be at least 1")
        if self.repetitions_per_trial < 0:
            raise ConfigInvalid("repetitions_per_trial", "must not be negative")
        if not 0 <= self.seed <= MAX_SEED:
            raise ConfigInvalid("seed", "must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ConfigInvalid("workers", "must be at least 1")
        labels = _selection_labels(self.scenario)
        if self.scenario in SELECTIVE_SCENARIOS and self.selection not in labels:
            raise ConfigInvalid("postselect", f"must be one of {', '.join(labels)}")
        unknown = [o for o in self.outputs if o not in OUTPUTS]
        if unknown:
            raise ConfigInvalid("outputs", f"unknown statistics {', '.join(unknown)}")
        if self.scenario == "lattice_check":
            if self.sites < 2:
                raise ConfigInvalid("sites", "lattice needs at least 2 sites")
            if abs(self.steps) >= self.sites:
                raise ConfigInvalid("steps", "|steps| must be below sites")
        if self.scenario == "single_mzi" and self.measurement_cut != "mid":
            raise ConfigInvalid("cut", "single_mzi measures at cut 'mid'")
        if self.scenario == "double_mzi" and self.measurement_cut not in ("mid1", "mid2"):
            raise ConfigInvalid("cut", "double_mzi measures at cut 'mid1' or 'mid2'")
        return self

    def to_dict(self) -> dict[str, Any]:
        """Config echo for reports. `workers` is left out: it never changes results."""
        data = asdict(self)
        data["outputs"] = list(self.outputs)
        data["postselect"] = self.selection
        del data["workers"]
        return data

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class Readout:
    cut: str
    observable: str
    q0: float


@dataclass
class TrialRecord:
    """Outcome of one preselected run."""

    trial_index: int
    postselected: bool
    readouts: list[Readout] = field(default_factory=list)
    flips: int = 0
    values: dict[str, float] = field(default_factory=dict)

    def readings(self, observable: str) -> list[float]:
        return [r.q0 for r in self.readouts if r.observable == observable]


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo estimate; stderr is None with fewer than two samples."""

    value: float
    stderr: float | None
    samples: int

    @classmethod
    def from_samples(cls, samples: list[float]) -> Estimate:
        n = len(samples)
        if n == 0:
            return cls(0.0, None, 0)
        mean = math.fsum(samples) / n
        if n < 2:
            return cls(mean, None, n)
        var = math.fsum((x - mean) ** 2 for x in samples) / (n - 1)
        return cls(mean, math.sqrt(var / n), n)

    @classmethod
    def from_bernoulli(cls, successes: int, n: int) -> Estimate:
        if n == 0:
            return cls(0.0, None, 0)
        p = successes / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n)

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        if self.stderr is None or self.stderr == 0.0:
            return math.isclose(self.value, target, abs_tol=1e-12)
        return abs(self.value - target) <= sigmas * self.stderr


@dataclass
class RunReport:
    """Aggregated statistics of one scenario run, with analytic predictions."""

    config: dict[str, Any]
    trials: int
    postselected_trials: int
    postselection_rate: Estimate | None = None
    pointer_means: dict[str, Estimate] = field(default_factory=dict)
    accumulated_shift: dict[str, Estimate] = field(default_factory=dict)
    flips: dict[str, Estimate] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)
    predictions: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunReport:
        def est(raw: dict[str, Any] | None) -> Estimate | None:
            return Estimate(**raw) if raw is not None else None

        return cls(
            config=data["config"],
            trials=data["trials"],
            postselected_trials=data["postselected_trials"],
            postselection_rate=est(data.get("postselection_rate")),
            pointer_means={k: Estimate(**v) for k, v in data.get("pointer_means", {}).items()},
            accumulated_shift={k: Estimate(**v) for k, v in data.get("accumulated_shift", {}).items()},
            flips={k: Estimate(**v) for k, v in data.get("flips", {}).items()},
            extras=data.get("extras", {}),
            predictions=data.get("predictions", {}),
        )

    def to_json(self) -> str:
        # repr-based float encoding round-trips exactly (at most 17 significant digits)
        return json.dumps(self.to_dict(), indent=2) + "\n"


class ReportStore:
    """JSON file storage for a run report."""

    def __init__(self, filepath: str):
        self.filepath = filepath
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)

    def load(self) -> RunReport | None:
        if not os.path.exists(self.filepath):
            return None
        with open(self.filepath) as f:
            return RunReport.from_dict(json.load(f))

    def save(self, report: RunReport) -> None:
        """Write atomically: temp file in the same directory, then rename."""
        write_atomic(self.filepath, report.to_json())


def write_trials_csv(records: list[TrialRecord], filepath: str) -> None:
    """Per-trial rows: index, postselected flag, flips, readings joined by ';'."""
    directory = os.path.dirname(filepath)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filepath, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["trial_index", "postselected", "flips", "q0"])
        for record in records:
            writer.writerow(
                [
                    record.trial_index,
                    int(record.postselected),
                    record.flips,
                    ";".join(repr(r.q0) for r in record.readouts),
                ]
            )


def write_atomic(filepath: str, text: str) -> None:
    """Temp file in the target directory, then rename over the target."""
    dir_path = os.path.dirname(filepath) or "."
    os.makedirs(dir_path, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(suffix=".json", dir=dir_path)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(temp_path, filepath)
    except Exception:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
