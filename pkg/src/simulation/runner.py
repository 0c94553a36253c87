"""Run orchestration: parallel trial chunks, ordered merge, aggregation."""

from __future__ import annotations

import asyncio
import dataclasses
import math
from typing import Any

from ..errors import ConfigInvalid, ZeroPostselection
from ..logging_config import get_logger
from .models import Estimate, RunReport, ScenarioConfig, TrialRecord
from .rng import chunk_ranges, trial_rng
from .scenarios import Scenario, double_well, interferometers, kicked_qubit, lattice

logger = get_logger(__name__)

SCENARIO_MODULES: dict[str, Scenario] = {
    "double_well": double_well,
    "single_mzi": interferometers,
    "double_mzi": interferometers,
    "kicked_qubit": kicked_qubit,
    "lattice_check": lattice,
}


def _simulate_chunk(cfg: ScenarioConfig, start: int, stop: int) -> list[TrialRecord]:
    plugin = SCENARIO_MODULES[cfg.scenario]
    return [plugin.simulate_trial(cfg, k, trial_rng(cfg.seed, k)) for k in range(start, stop)]


async def simulate_trials(cfg: ScenarioConfig) -> list[TrialRecord]:
    """Simulate every trial, chunked over `cfg.workers` threads, in trial order."""
    chunks = chunk_ranges(cfg.trials, cfg.workers)
    tasks = [asyncio.to_thread(_simulate_chunk, cfg, start, stop) for start, stop in chunks]
    results = await asyncio.gather(*tasks)
    return [record for chunk in results for record in chunk]


async def execute(cfg: ScenarioConfig) -> tuple[RunReport, list[TrialRecord]]:
    """Validate, simulate and aggregate one run.

    Returns:
        The report and the per-trial records it was built from.
    """
    cfg.validate()
    logger.info(
        "Running %s: %d trials x %d repetitions on %d worker(s)",
        cfg.scenario,
        cfg.trials,
        cfg.repetitions_per_trial,
        cfg.workers,
        extra={"context": {"scenario": cfg.scenario, "trials": cfg.trials, "seed": cfg.seed, "workers": cfg.workers}},
    )
    records = await simulate_trials(cfg)
    report = aggregate(cfg, records, SCENARIO_MODULES[cfg.scenario].predictions(cfg))
    logger.info(
        "Postselected %d of %d trials",
        report.postselected_trials,
        report.trials,
        extra={"context": {"scenario": cfg.scenario, "postselected": report.postselected_trials}},
    )
    return report, records


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    report, _ = asyncio.run(execute(cfg))
    return report


def accumulated_shift(cfg: ScenarioConfig) -> dict[str, Estimate]:
    """Per-arm pointer totals over the repetitions of each postselected electron."""
    if cfg.scenario != "double_mzi":
        raise ConfigInvalid("scenario", "accumulated shift is defined for double_mzi")
    return run_scenario(dataclasses.replace(cfg, outputs=())).accumulated_shift


def aggregate(cfg: ScenarioConfig, records: list[TrialRecord], predictions: dict[str, Any]) -> RunReport:
    """Reduce ordered trial records to a report.

    Pointer statistics use postselected trials only, one sample per trial
    (mean or total of that trial's readings). Flip statistics use every
    trial.
    """
    selected = [r for r in records if r.postselected]
    if not selected:
        raise ZeroPostselection(f"none of {len(records)} {cfg.scenario} trials passed postselection {cfg.selection!r}")

    report = RunReport(config=cfg.to_dict(), trials=len(records), postselected_trials=len(selected))
    if cfg.wants("postselection"):
        report.postselection_rate = Estimate.from_bernoulli(len(selected), len(records))

    n = cfg.repetitions_per_trial
    for name in predictions.get("observables", []):
        if cfg.wants("pointer_means") and n > 0:
            report.pointer_means[name] = Estimate.from_samples(
                [math.fsum(r.readings(name)) / n for r in selected]
            )
        if cfg.wants("accumulated_shift"):
            report.accumulated_shift[name] = Estimate.from_samples([math.fsum(r.readings(name)) for r in selected])

    if cfg.wants("flips") and n > 0 and cfg.scenario != "lattice_check":
        report.flips = {
            "rate": Estimate.from_samples([r.flips / n for r in records]),
            "no_flip_fraction": Estimate.from_bernoulli(sum(1 for r in records if r.flips == 0), len(records)),
        }

    if cfg.scenario == "kicked_qubit" and cfg.wants("kick"):
        report.extras["kick"] = {"outcome_mean": Estimate.from_samples([r.values["outcome"] for r in records])}
    if cfg.scenario == "lattice_check" and cfg.wants("lattice"):
        deviations = [r.values["deviation"] for r in records]
        report.extras["lattice"] = {
            "potentials": len(deviations),
            "max_deviation": max(deviations),
            "within_tolerance": max(deviations) <= predictions["tolerance"],
        }

    if not cfg.wants("weak_values"):
        predictions = {k: v for k, v in predictions.items() if k != "weak_values"}
    report.predictions = predictions
    return report
