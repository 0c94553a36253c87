"""Modular variables on a cyclic lattice and the kicked double-well qubit.

Translations follow e^{iPℓ}|x> = |x+ℓ>. With that direction the exact
operator identity is e^{iPℓ} V(X) = V(X - ℓI) e^{iPℓ}: the potential seen by
the translated operator is the one carried along by the shift, which is
what `shifted_potential` returns.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import dft

from ..errors import DimMismatch, StepsOutOfRange
from .hilbert import IDENTITY_2, SIGMA_X, SIGMA_Z, LinOp, lin_comb, matrix_exponential


@dataclass(frozen=True)
class CyclicLattice:
    d: int
    spacing: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"lattice needs at least one site, got {self.d}")
        if not (self.spacing > 0 and self.mass > 0):
            raise ValueError("spacing and mass must be positive")

    @property
    def length(self) -> float:
        return self.d * self.spacing

    @property
    def positions(self) -> NDArray[np.float64]:
        return np.arange(self.d) * self.spacing

    @property
    def momenta(self) -> NDArray[np.float64]:
        """2πk/(d·spacing) for k = -⌊d/2⌋ … ⌈d/2⌉-1, in DFT order."""
        k = np.fft.fftfreq(self.d) * self.d
        return 2.0 * math.pi * k / self.length


@dataclass(frozen=True, eq=False)
class LatticePotential:
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("potential must be a finite 1-d sequence")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_values(cls, values: ArrayLike) -> LatticePotential:
        return cls(np.asarray(values, dtype=float))


def translation_op(lat: CyclicLattice, steps: int) -> LinOp:
    """Permutation mapping site j to (j + steps) mod d."""
    if abs(steps) >= lat.d and lat.d > 1:
        raise StepsOutOfRange(f"|steps|={abs(steps)} must be below d={lat.d}")
    if lat.d == 1 and steps != 0:
        raise StepsOutOfRange("a single-site lattice only admits steps=0")
    return LinOp(np.roll(np.eye(lat.d), steps, axis=0))


def momentum_op(lat: CyclicLattice) -> LinOp:
    """Lattice momentum diagonal in the DFT basis, signed so exp(iPℓ) shifts by +ℓ."""
    fourier = dft(lat.d, scale="sqrtn")
    return LinOp(fourier @ np.diag(lat.momenta) @ fourier.conj().T)


def position_op(lat: CyclicLattice) -> LinOp:
    return LinOp(np.diag(lat.positions))


def potential_op(potential: LatticePotential) -> LinOp:
    return LinOp(np.diag(potential.values))


def shifted_potential(potential: LatticePotential, steps: int) -> LatticePotential:
    """The potential carried along by translation_op(steps)."""
    return LatticePotential(np.roll(potential.values, steps))


def hamiltonian(lat: CyclicLattice, potential: LatticePotential) -> LinOp:
    """H = P^2/2m + V(X)."""
    if potential.values.size != lat.d:
        raise DimMismatch(potential.values.size, lat.d)
    p = momentum_op(lat).entries
    kinetic = p @ p / (2.0 * lat.mass)
    return LinOp(kinetic + potential_op(potential).entries)


def heisenberg_derivative(op: LinOp, h: LinOp) -> LinOp:
    """-i[A, H]."""
    if op.dim != h.dim:
        raise DimMismatch(op.dim, h.dim)
    return LinOp(-1j * (op.entries @ h.entries - h.entries @ op.entries))


def heisenberg_evolve(op: LinOp, unitary: LinOp) -> LinOp:
    """U† A U."""
    if op.dim != unitary.dim:
        raise DimMismatch(op.dim, unitary.dim)
    return unitary.adjoint() @ op @ unitary


def modular_commutator_check(lat: CyclicLattice, potential: LatticePotential, steps: int) -> float:
    """Max deviation between both sides of the modular-momentum equation of motion.

    Compares -i[e^{iPℓ}, H] with -i[V_ℓ(X) - V(X)] e^{iPℓ}, where V_ℓ is the
    potential carried by the translation.
    """
    shift = translation_op(lat, steps)
    lhs = heisenberg_derivative(shift, hamiltonian(lat, potential)).entries
    carried = shifted_potential(potential, steps).values - potential.values
    rhs = -1j * np.diag(carried) @ shift.entries
    return float(np.max(np.abs(lhs - rhs)))


def random_potentials(
    rng: np.random.Generator, d: int, count: int, scale: float = 1.0
) -> Sequence[LatticePotential]:
    return [LatticePotential(rng.uniform(-scale, scale, size=d)) for _ in range(count)]


def kicked_qubit_evolution(v0: float) -> LinOp:
    """exp(-i V0 (1 - σ_z)/2): a delta kick on the left well only."""
    left_well = lin_comb([(0.5, IDENTITY_2), (-0.5, SIGMA_Z)])
    return matrix_exponential(left_well, -1j * v0)


def qubit_translation() -> LinOp:
    """e^{iσ_x π/2} = iσ_x, exchanging |L> and |R> up to a global phase."""
    return matrix_exponential(SIGMA_X, 1j * math.pi / 2)
