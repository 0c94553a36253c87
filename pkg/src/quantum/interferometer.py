"""Two-mode interferometer networks in the path basis.

Mode 0 is the left arm (|σ_z=-1>), mode 1 the right arm (|σ_z=+1>). Arm
labels change from stage to stage but always map onto one of the two modes:

    stage    left    right
    input    in_L    in_R
    MZI1     L1      R1
    MZI2     L2      R2
    output   L       R
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from ..errors import OrderViolation, UnknownArm, UnknownCut
from ..logging_config import get_logger
from .hilbert import ComplexArray, Ket, LinOp, basis_ket
from .pointer import dephase
from .tsvf import TwoStateVector, make_tsv, weak_value

logger = get_logger(__name__)

STANDARD_INPUT = "in_L"

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class ElementKind(str, Enum):
    BEAMSPLITTER = "beamsplitter"
    PHASE = "phase"
    FLUX = "flux"


@dataclass(frozen=True)
class Element:
    """Balanced beamsplitter on two arms, or a phase/flux plate on one arm."""

    kind: ElementKind
    arms: tuple[str, ...]
    value: float = 0.0

    def __post_init__(self) -> None:
        expected = 2 if self.kind is ElementKind.BEAMSPLITTER else 1
        if len(self.arms) != expected:
            raise ValueError(f"{self.kind.value} acts on {expected} arm(s), got {self.arms}")

    def matrix(self, modes: dict[str, int], dim: int) -> ComplexArray:
        m = np.eye(dim, dtype=np.complex128)
        if self.kind is ElementKind.BEAMSPLITTER:
            i, j = (modes[a] for a in self.arms)
            m[i, i] = m[j, j] = _INV_SQRT2
            m[i, j] = m[j, i] = 1j * _INV_SQRT2
        else:
            k = modes[self.arms[0]]
            m[k, k] = complex(math.cos(self.value), math.sin(self.value))
        return m

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "arms": list(self.arms), "value": self.value}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Element:
        return cls(ElementKind(data["kind"]), tuple(data["arms"]), float(data.get("value", 0.0)))


@dataclass(frozen=True)
class Cut:
    name: str
    position: int
    arms: tuple[str, ...]


@dataclass(frozen=True)
class Network:
    """Ordered elements over labeled arms, with named cuts between them."""

    arm_labels: tuple[str, ...]
    arm_indices: tuple[int, ...]
    elements: tuple[Element, ...]
    cuts: tuple[Cut, ...]
    dim: int = 2

    def __post_init__(self) -> None:
        if len(self.arm_labels) != len(self.arm_indices):
            raise ValueError("every arm label needs a mode index")
        if any(not 0 <= i < self.dim for i in self.arm_indices):
            raise ValueError(f"mode indices must lie in [0, {self.dim})")
        for element in self.elements:
            for arm in element.arms:
                if arm not in self.arm_labels:
                    raise UnknownArm(f"element {element.kind.value} references undeclared arm {arm!r}")
            if element.kind is ElementKind.BEAMSPLITTER and len({self.modes[a] for a in element.arms}) != 2:
                raise ValueError(f"beamsplitter arms {element.arms} share a mode")
        for cut in self.cuts:
            if not 0 <= cut.position <= len(self.elements):
                raise ValueError(f"cut {cut.name!r} lies outside the element list")
            for arm in cut.arms:
                if arm not in self.arm_labels:
                    raise UnknownArm(f"cut {cut.name!r} references undeclared arm {arm!r}")

    @property
    def modes(self) -> dict[str, int]:
        return dict(zip(self.arm_labels, self.arm_indices, strict=True))

    def cut(self, name: str) -> Cut:
        for cut in self.cuts:
            if cut.name == name:
                return cut
        raise UnknownCut(f"no cut named {name!r}")

    def cut_of_arm(self, arm: str) -> Cut:
        for cut in self.cuts:
            if arm in cut.arms:
                return cut
        raise UnknownArm(f"arm {arm!r} is not attached to any cut")

    @property
    def input_cut(self) -> Cut:
        return min(self.cuts, key=lambda c: c.position)

    @property
    def output_cut(self) -> Cut:
        return max(self.cuts, key=lambda c: c.position)

    def to_dict(self) -> dict[str, Any]:
        return {
            "arms": dict(zip(self.arm_labels, self.arm_indices, strict=True)),
            "elements": [e.to_dict() for e in self.elements],
            "cuts": [{"name": c.name, "position": c.position, "arms": list(c.arms)} for c in self.cuts],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Network:
        arms: dict[str, int] = data["arms"]
        return cls(
            arm_labels=tuple(arms),
            arm_indices=tuple(int(v) for v in arms.values()),
            elements=tuple(Element.from_dict(e) for e in data["elements"]),
            cuts=tuple(Cut(c["name"], int(c["position"]), tuple(c["arms"])) for c in data["cuts"]),
        )


def transfer(net: Network, from_cut: str, to_cut: str) -> LinOp:
    """Product of element matrices between two cuts."""
    start, stop = net.cut(from_cut).position, net.cut(to_cut).position
    if start > stop:
        raise OrderViolation(f"cut {from_cut!r} comes after {to_cut!r}")
    modes = net.modes
    total = np.eye(net.dim, dtype=np.complex128)
    for element in net.elements[start:stop]:
        total = element.matrix(modes, net.dim) @ total
    return LinOp(total)


def arm_projector(net: Network, arm: str) -> LinOp:
    if arm not in net.arm_labels:
        raise UnknownArm(f"no arm named {arm!r}")
    ket = basis_ket(net.dim, net.modes[arm])
    return LinOp(np.outer(ket.amps, ket.amps.conj()))


def port_state(net: Network, arm: str) -> Ket:
    """Basis state of a labeled arm."""
    if arm not in net.arm_labels:
        raise UnknownArm(f"no arm named {arm!r}")
    return basis_ket(net.dim, net.modes[arm])


def forward_state(net: Network, cut: str, in_port: str = STANDARD_INPUT) -> Ket:
    """Preselected state from `in_port`, propagated to `cut`."""
    return _propagate(net, net.cut_of_arm(in_port).name, cut, port_state(net, in_port))


def _propagate(net: Network, from_cut: str, to_cut: str, state: Ket) -> Ket:
    return Ket(transfer(net, from_cut, to_cut).entries @ state.amps)


def port_probabilities(net: Network, in_port: str = STANDARD_INPUT) -> dict[str, float]:
    """Exit probability of each output arm."""
    out = forward_state(net, net.output_cut.name, in_port)
    modes = net.modes
    return {arm: float(abs(out.amps[modes[arm]]) ** 2) for arm in net.output_cut.arms}


def network_tsv(net: Network, cut: str, post_port: str, in_port: str = STANDARD_INPUT) -> TwoStateVector:
    """Two-state vector at `cut`: forward from in_port, backward from post_port."""
    source, sink = net.cut_of_arm(in_port).name, net.cut_of_arm(post_port).name
    return make_tsv(
        port_state(net, in_port),
        transfer(net, source, cut),
        port_state(net, post_port),
        transfer(net, cut, sink),
    )


def build_single_mzi(flux: float = 0.0) -> Network:
    """Balanced MZI with a flux plate on the left arm between the beamsplitters."""
    labels = ("in_L", "in_R", "L1", "R1", "L", "R")
    return Network(
        arm_labels=labels,
        arm_indices=(0, 1, 0, 1, 0, 1),
        elements=(
            Element(ElementKind.BEAMSPLITTER, ("in_L", "in_R")),
            Element(ElementKind.FLUX, ("L1",), flux),
            Element(ElementKind.BEAMSPLITTER, ("L1", "R1")),
        ),
        cuts=(
            Cut("input", 0, ("in_L", "in_R")),
            Cut("mid", 1, ("L1", "R1")),
            Cut("output", 3, ("L", "R")),
        ),
    )


def tune_mzi1_phase() -> float:
    """MZI1 phase on L1 that routes the standard input entirely into R2.

    Solves e^{iφ} B00 u0 + B01 u1 = 0 for u = BS·|in_L>, the single condition
    for zero forward amplitude on L2.
    """
    bs = Element(ElementKind.BEAMSPLITTER, ("a", "b")).matrix({"a": 0, "b": 1}, 2)
    u = bs[:, 0]
    ratio = -bs[0, 1] * u[1] / (bs[0, 0] * u[0])
    phase = float(np.angle(ratio)) % (2.0 * math.pi)
    if math.isclose(phase, 2.0 * math.pi, abs_tol=1e-15):
        phase = 0.0
    logger.debug("MZI1 tuned phase: %.17g rad", phase)
    return phase


MZI1_TUNED_PHASE = tune_mzi1_phase()


def build_double_mzi(flux: float, mzi1_phase: float = MZI1_TUNED_PHASE) -> Network:
    """Two MZIs in series; MZI2 encloses a flux on arm L2.

    With the tuned MZI1 phase the forward wave from in_L never enters L2.
    """
    labels = ("in_L", "in_R", "L1", "R1", "L2", "R2", "L", "R")
    return Network(
        arm_labels=labels,
        arm_indices=(0, 1, 0, 1, 0, 1, 0, 1),
        elements=(
            Element(ElementKind.BEAMSPLITTER, ("in_L", "in_R")),
            Element(ElementKind.PHASE, ("L1",), mzi1_phase),
            Element(ElementKind.BEAMSPLITTER, ("L1", "R1")),
            Element(ElementKind.FLUX, ("L2",), flux),
            Element(ElementKind.BEAMSPLITTER, ("L2", "R2")),
        ),
        cuts=(
            Cut("input", 0, ("in_L", "in_R")),
            Cut("mid1", 2, ("L1", "R1")),
            Cut("mid2", 3, ("L2", "R2")),
            Cut("output", 5, ("L", "R")),
        ),
    )


def mzi1_weak_trajectory(flux: float, post_port: str) -> tuple[complex, complex]:
    """Weak values of the L1 and R1 projectors at cut mid1."""
    net = build_double_mzi(flux)
    tsv = network_tsv(net, "mid1", post_port)
    return weak_value(tsv, arm_projector(net, "L1")), weak_value(tsv, arm_projector(net, "R1"))


def leak_probability(net: Network, g0: float, delta: float, repetitions: int = 1) -> float:
    """Exact forbidden-arm (L2) occupancy after unread weak arm couplings at mid1.

    Each repetition couples one pointer to the L1 projector and one to the R1
    projector.
    """
    pre = forward_state(net, "mid1")
    rho = np.outer(pre.amps, pre.amps.conj())
    for _ in range(repetitions):
        for arm in net.cut("mid1").arms:
            rho = dephase(rho, arm_projector(net, arm), g0, delta)
    u = transfer(net, "mid1", "mid2").entries
    rho = u @ rho @ u.conj().T
    k = net.modes["L2"]
    return float(rho[k, k].real)
