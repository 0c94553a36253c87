"""Exact-identity suites run by `absim check`."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from ..logging_config import get_logger
from ..quantum.hilbert import SIGMA_X, SIGMA_Z, LinOp
from ..quantum.interferometer import (
    arm_projector,
    build_double_mzi,
    build_single_mzi,
    forward_state,
    mzi1_weak_trajectory,
    network_tsv,
    port_probabilities,
    transfer,
)
from ..quantum.modular import (
    CyclicLattice,
    kicked_qubit_evolution,
    modular_commutator_check,
    random_potentials,
    translation_op,
)
from ..quantum.tsvf import double_well_tsv, weak_value
from .rng import trial_rng
from .scenarios.kicked_qubit import heisenberg_deviation, sigma_z_deviation
from .scenarios.lattice import TOLERANCE as LATTICE_TOLERANCE
from .scenarios.lattice import translation_generator_deviation

logger = get_logger(__name__)

EXACT = 1e-12
KICKS = (0.0, math.pi / 4, math.pi / 2, math.pi)
LATTICE_SIZES = (8, 32, 128)
LATTICE_POTENTIALS = 50


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    bound: float
    passed: bool


def _at_most(suite: str, name: str, value: float, bound: float) -> CheckResult:
    return CheckResult(suite, name, value, bound, bool(value <= bound))


def lattice_suite(seed: int = 0) -> Iterator[CheckResult]:
    for d in LATTICE_SIZES:
        lat = CyclicLattice(d)
        for steps in (1, d // 4, d // 2):
            potentials = random_potentials(trial_rng(seed, 0, d, steps), d, LATTICE_POTENTIALS)
            worst = max(modular_commutator_check(lat, potential, steps) for potential in potentials)
            yield _at_most("lattice", f"commutator d={d} steps={steps}", worst, LATTICE_TOLERANCE)
            yield _at_most(
                "lattice",
                f"exp(iPl) d={d} steps={steps}",
                translation_generator_deviation(d, steps),
                LATTICE_TOLERANCE,
            )


def kick_suite() -> Iterator[CheckResult]:
    for v0 in KICKS:
        yield _at_most("kicked_qubit", f"sigma_x rotation v0={v0:.6g}", heisenberg_deviation(v0), EXACT)
        yield _at_most("kicked_qubit", f"sigma_z invariance v0={v0:.6g}", sigma_z_deviation(v0), EXACT)


def _unitarity_error(op: LinOp) -> float:
    """max |U†U - I|."""
    gram = op.entries.conj().T @ op.entries
    return float(np.max(np.abs(gram - np.eye(op.dim))))


def unitarity_suite() -> Iterator[CheckResult]:
    for v0 in KICKS:
        yield _at_most("unitarity", f"kick v0={v0:.6g}", _unitarity_error(kicked_qubit_evolution(v0)), EXACT)
    for d in LATTICE_SIZES:
        yield _at_most("unitarity", f"translation d={d}", _unitarity_error(translation_op(CyclicLattice(d), 1)), EXACT)
    for flux in (0.0, math.pi / 2, math.pi):
        for kind, net in (("single", build_single_mzi(flux)), ("double", build_double_mzi(flux))):
            op = transfer(net, net.input_cut.name, net.output_cut.name)
            yield _at_most("unitarity", f"{kind} MZI flux={flux:.6g}", _unitarity_error(op), EXACT)


def interferometer_suite() -> Iterator[CheckResult]:
    dark = port_probabilities(build_single_mzi(0.0))["L"]
    flipped = port_probabilities(build_single_mzi(math.pi))["R"]
    yield _at_most("interferometer", "flux 0 dark port", dark, EXACT)
    yield _at_most("interferometer", "flux pi dark port", flipped, EXACT)

    for flux in (0.0, math.pi / 2, math.pi):
        net = build_double_mzi(flux)
        l2 = abs(forward_state(net, "mid2").amps[net.modes["L2"]])
        yield _at_most("interferometer", f"forward L2 amplitude flux={flux:.6g}", l2, EXACT)

    net = build_double_mzi(math.pi)
    tsv = network_tsv(net, "mid2", "R")
    yield _at_most("interferometer", "weak value L2", abs(weak_value(tsv, arm_projector(net, "L2"))), 1e-10)
    yield _at_most("interferometer", "weak value R2", abs(weak_value(tsv, arm_projector(net, "R2")) - 1.0), 1e-10)

    with_flux = np.array(mzi1_weak_trajectory(math.pi, "R"))
    without = np.array(mzi1_weak_trajectory(0.0, "R"))
    change = float(np.max(np.abs(with_flux - without)))
    yield CheckResult("interferometer", "MZI1 weak values follow the flux", change, 0.1, change > 0.1)


def double_well_suite() -> Iterator[CheckResult]:
    for inverted in (False, True):
        tsv = double_well_tsv(inverted)
        for name, op in (("sigma_x", SIGMA_X), ("sigma_z", SIGMA_Z)):
            label = f"{name} weak value{' (inverted)' if inverted else ''}"
            yield _at_most("double_well", label, abs(weak_value(tsv, op) - 1.0), EXACT)


SUITES: dict[str, Callable[[], Iterator[CheckResult]]] = {
    "lattice": lattice_suite,
    "kicked_qubit": kick_suite,
    "unitarity": unitarity_suite,
    "interferometer": interferometer_suite,
    "double_well": double_well_suite,
}


def run_checks() -> list[CheckResult]:
    results = []
    for suite, run in SUITES.items():
        found = list(run())
        failures = [r for r in found if not r.passed]
        for r in failures:
            logger.error("%s: %s = %.3e (bound %.1e)", suite, r.name, r.value, r.bound)
        logger.info("%s: %d/%d passed", suite, len(found) - len(failures), len(found))
        results.extend(found)
    return results


def summary(results: list[CheckResult]) -> dict[str, Any]:
    return {
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
