"""Finite-dimensional complex states and operators.

Basis convention for qubits: index 0 is |σ_z=-1> = |L>, index 1 is
|σ_z=+1> = |R>. Product spaces are always ordered (system, pointer).
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import expm

from ..errors import DimMismatch, ZeroVector

ATOL = 1e-12

ComplexArray = NDArray[np.complex128]


def _frozen(values: ArrayLike) -> ComplexArray:
    arr = np.array(values, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    """Pure state vector. Not necessarily normalized: use make_ket for that."""

    amps: ComplexArray

    def __post_init__(self) -> None:
        arr = _frozen(self.amps)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"Ket needs a non-empty 1-d amplitude array, got shape {arr.shape}")
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return int(self.amps.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> Ket:
        return make_ket(self.amps)

    def __repr__(self) -> str:
        return f"Ket({np.array2string(self.amps, precision=6)})"


@dataclass(frozen=True, eq=False)
class LinOp:
    """Dense square matrix acting on Kets.

    The hermitian and unitary flags are derived from the entries (tolerance
    ATOL) and cached, so they can never disagree with the matrix.
    """

    entries: ComplexArray

    def __post_init__(self) -> None:
        arr = _frozen(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"LinOp needs a non-empty square matrix, got shape {arr.shape}")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @cached_property
    def hermitian(self) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= ATOL)

    @cached_property
    def unitary(self) -> bool:
        gram = self.entries @ self.entries.conj().T
        return bool(np.max(np.abs(gram - np.eye(self.dim))) <= ATOL)

    @cached_property
    def eigensystem(self) -> tuple[NDArray[np.float64], ComplexArray]:
        """Eigenvalues (ascending) and orthonormal eigenvectors as columns."""
        values, vectors = np.linalg.eigh(self.entries)
        return values, vectors

    def adjoint(self) -> LinOp:
        return LinOp(self.entries.conj().T)

    def __matmul__(self, other: LinOp) -> LinOp:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"LinOp(dim={self.dim}, hermitian={self.hermitian}, unitary={self.unitary})"


def make_ket(amps: ArrayLike) -> Ket:
    """Build a unit-norm Ket from raw amplitudes.

    Raises:
        ZeroVector: if every amplitude is zero.
    """
    arr = np.asarray(amps, dtype=np.complex128).ravel()
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroVector("cannot normalize a zero vector")
    return Ket(arr / norm)


def apply(op: LinOp, s: Ket) -> Ket:
    """Matrix-vector product. The result is not renormalized."""
    if op.dim != s.dim:
        raise DimMismatch(op.dim, s.dim)
    return Ket(op.entries @ s.amps)


def inner(a: Ket, b: Ket) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise DimMismatch(a.dim, b.dim)
    return complex(np.vdot(a.amps, b.amps))


def tensor(a: Ket | LinOp, b: Ket | LinOp) -> Ket | LinOp:
    """Kronecker product, ordered (system, pointer)."""
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(np.kron(a.amps, b.amps))
    if isinstance(a, LinOp) and isinstance(b, LinOp):
        return LinOp(np.kron(a.entries, b.entries))
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def matrix_exponential(op: LinOp, scale: complex) -> LinOp:
    """exp(scale * op) by Padé scaling-and-squaring."""
    return LinOp(expm(complex(scale) * op.entries))


def compose(a: LinOp, b: LinOp) -> LinOp:
    if a.dim != b.dim:
        raise DimMismatch(a.dim, b.dim)
    return LinOp(a.entries @ b.entries)


def lin_comb(terms: Sequence[tuple[complex, LinOp]]) -> LinOp:
    """Σ coeff·op over (coeff, op) pairs."""
    if not terms:
        raise ValueError("lin_comb needs at least one term")
    dim = terms[0][1].dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    for coeff, op in terms:
        if op.dim != dim:
            raise DimMismatch(dim, op.dim)
        total += coeff * op.entries
    return LinOp(total)


def expectation(op: LinOp, s: Ket) -> complex:
    return inner(s, apply(op, s))


def projector(s: Ket) -> LinOp:
    """|s><s| for the normalized direction of s."""
    unit = s.normalized()
    return LinOp(np.outer(unit.amps, unit.amps.conj()))


def identity(dim: int) -> LinOp:
    return LinOp(np.eye(dim))


def basis_ket(dim: int, index: int) -> Ket:
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return Ket(amps)


def equal_up_to_phase(a: Ket, b: Ket, atol: float = ATOL) -> bool:
    """True iff |<a|b>| >= 1 - atol for the normalized states."""
    return abs(inner(a.normalized(), b.normalized())) >= 1.0 - atol


def qubit_state(theta: float, phi: float) -> Ket:
    """cos(θ/2)|L> + e^{iφ} sin(θ/2)|R>."""
    amps = [math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)]
    return Ket(np.array(amps, dtype=np.complex128))


IDENTITY_2 = identity(2)
SIGMA_X = LinOp(np.array([[0, 1], [1, 0]], dtype=np.complex128))
SIGMA_Z = LinOp(np.array([[-1, 0], [0, 1]], dtype=np.complex128))
# σ_y = iσ_xσ_z in this basis ordering
SIGMA_Y = LinOp(1j * (SIGMA_X.entries @ SIGMA_Z.entries))

KET_L = basis_ket(2, 0)
KET_R = basis_ket(2, 1)
KET_X_PLUS = make_ket([1, 1])
KET_X_MINUS = make_ket([1, -1])
