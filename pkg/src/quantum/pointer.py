"""Gaussian von Neumann pointers.

A pointer starts in Φ(q) ∝ exp(-(q - center)^2 / 4Δ^2). The coupling
exp(i g0 A ⊗ P) translates the pointer by +g0·λ on the λ-eigenspace of A,
so the joint state stays a finite sum of shifted Gaussians and every
integral below is closed form. With |σ_x=-1> = (|L> - |R>)/√2 this sign
reproduces the -g0/2Δ^2 coefficient of the first-order expansion.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from ..errors import DimMismatch, NonHermitian, NonPositiveDelta, OrthogonalSelection, OutOfRegime
from .hilbert import (
    KET_X_MINUS,
    KET_X_PLUS,
    SIGMA_Z,
    ComplexArray,
    Ket,
    LinOp,
    equal_up_to_phase,
    inner,
    make_ket,
)
from .tsvf import EPS_OVERLAP

EIGEN_GROUP_TOL = 1e-9
BRANCH_CUTOFF = 1e-15


@dataclass(frozen=True)
class GaussianPointer:
    delta: float
    center: float = 0.0

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise NonPositiveDelta(f"pointer width must be positive, got {self.delta}")

    def wavefunction(self, q: ArrayLike) -> NDArray[np.float64]:
        """Normalized Φ(q), real."""
        q = np.asarray(q, dtype=float)
        norm = (2.0 * math.pi * self.delta**2) ** -0.25
        return norm * np.exp(-((q - self.center) ** 2) / (4.0 * self.delta**2))

    def density(self, q: ArrayLike) -> NDArray[np.float64]:
        return self.wavefunction(q) ** 2


@dataclass(frozen=True, eq=False)
class Branch:
    ket: Ket
    coeff: complex
    shift: float


@dataclass(frozen=True, eq=False)
class GaussianTerm:
    """coeff · |system> ⊗ (q - center)^degree Φ_Δ(q - center), degree 0 or 1."""

    system: ComplexArray
    coeff: complex
    center: float
    degree: int = 0


@dataclass(frozen=True, eq=False)
class PointerCoupledState:
    """Σ_b coeff_b |branch_b> ⊗ Φ(q - shift_b) with orthonormal branches.

    `reference` is the system state before coupling; readouts measure their
    flips against it.
    """

    delta: float
    branches: tuple[Branch, ...]
    reference: Ket

    @property
    def dim(self) -> int:
        return self.reference.dim

    @property
    def shifts(self) -> NDArray[np.float64]:
        return np.array([b.shift for b in self.branches])

    @property
    def weights(self) -> NDArray[np.float64]:
        return np.array([abs(b.coeff) ** 2 for b in self.branches])

    def terms(self) -> list[GaussianTerm]:
        return [GaussianTerm(b.ket.amps, b.coeff, b.shift) for b in self.branches]


@dataclass(frozen=True, eq=False)
class FirstOrderState:
    """Two-term small-coupling expansion around |σ_x=+1> (unnormalized)."""

    delta: float
    g0: float
    phase: complex
    center: float = 0.0

    @property
    def correction_coefficient(self) -> float:
        return -self.g0 / (2.0 * self.delta**2)

    def terms(self) -> list[GaussianTerm]:
        return [
            GaussianTerm(KET_X_PLUS.amps, self.phase, self.center, 0),
            GaussianTerm(KET_X_MINUS.amps, self.phase * self.correction_coefficient, self.center, 1),
        ]


@dataclass(frozen=True, eq=False)
class ReadoutRecord:
    q0: float
    post_system: Ket
    flipped: bool
    flip_weight: float


@dataclass(frozen=True, eq=False)
class ReadoutBatch:
    q0: NDArray[np.float64]
    post_states: ComplexArray
    flip_weights: NDArray[np.float64]


def couple(system: Ket, meas_op: LinOp, g0: float, ptr: GaussianPointer) -> PointerCoupledState:
    """Exact entangled state after exp(i g0 A ⊗ P).

    Weakness g0 << Δ is not enforced.
    """
    if meas_op.dim != system.dim:
        raise DimMismatch(meas_op.dim, system.dim)
    if not meas_op.hermitian:
        raise NonHermitian("measured observable must be hermitian")

    psi = system.normalized().amps
    branches: list[Branch] = []
    for eigenvalue, proj in _eigenspaces(meas_op):
        projected = proj @ psi
        weight = float(np.linalg.norm(projected))
        if weight > BRANCH_CUTOFF:
            branches.append(
                Branch(
                    ket=Ket(projected / weight),
                    coeff=complex(weight),
                    shift=ptr.center + g0 * eigenvalue,
                )
            )
    return PointerCoupledState(delta=ptr.delta, branches=tuple(branches), reference=system.normalized())


def _eigenspaces(op: LinOp) -> list[tuple[float, ComplexArray]]:
    """(eigenvalue, projector) pairs, degenerate eigenvalues grouped."""
    values, vectors = op.eigensystem
    spaces = []
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[start] <= EIGEN_GROUP_TOL:
            stop += 1
        basis = vectors[:, start:stop]
        spaces.append((float(np.mean(values[start:stop])), basis @ basis.conj().T))
        start = stop
    return spaces


def dephase(rho: ComplexArray, meas_op: LinOp, g0: float, delta: float) -> ComplexArray:
    """System state after a coupling whose pointer is never read.

    Σ_{λ,μ} exp(-g0^2 (λ-μ)^2 / 8Δ^2) P_λ ρ P_μ.
    """
    if not meas_op.hermitian:
        raise NonHermitian("measured observable must be hermitian")
    spaces = _eigenspaces(meas_op)
    out = np.zeros_like(rho, dtype=np.complex128)
    for lam, p_lam in spaces:
        for mu, p_mu in spaces:
            out += math.exp(-(g0**2) * (lam - mu) ** 2 / (8.0 * delta**2)) * (p_lam @ rho @ p_mu)
    return out


def first_order_state(system: Ket, g0: float, ptr: GaussianPointer) -> FirstOrderState:
    """|σ_x=+1>Φ(q) - (g0/2Δ^2)|σ_x=-1> qΦ(q), for a σ_z coupling.

    Raises:
        OutOfRegime: if g0/Δ >= 1.
        ValueError: if system is not |σ_x=+1> up to phase.
    """
    if abs(g0) / ptr.delta >= 1.0:
        raise OutOfRegime(f"g0/delta = {abs(g0) / ptr.delta:.3g} >= 1")
    if system.dim != 2 or not equal_up_to_phase(system, KET_X_PLUS):
        raise ValueError("first-order expansion is taken around |sigma_x=+1>")
    phase = inner(KET_X_PLUS, system.normalized())
    return FirstOrderState(delta=ptr.delta, g0=g0, phase=phase / abs(phase), center=ptr.center)


def _pointer_overlap(c1: float, n1: int, c2: float, n2: int, delta: float) -> float:
    """∫ (q-c1)^n1 (q-c2)^n2 Φ(q-c1) Φ(q-c2) dq for n1, n2 in {0, 1}."""
    d = c2 - c1
    w = math.exp(-(d**2) / (8.0 * delta**2))
    if n1 == 0 and n2 == 0:
        return w
    if n1 == 1 and n2 == 0:
        return w * d / 2.0
    if n1 == 0 and n2 == 1:
        return -w * d / 2.0
    if n1 == 1 and n2 == 1:
        return w * (delta**2 - d**2 / 4.0)
    raise ValueError(f"unsupported polynomial degrees {n1}, {n2}")


def state_inner(a: Sequence[GaussianTerm], b: Sequence[GaussianTerm], delta: float) -> complex:
    total = 0j
    for ta in a:
        for tb in b:
            sys_overlap = complex(np.vdot(ta.system, tb.system))
            if sys_overlap == 0:
                continue
            total += (
                ta.coeff.conjugate()
                * tb.coeff
                * sys_overlap
                * _pointer_overlap(ta.center, ta.degree, tb.center, tb.degree, delta)
            )
    return total


def fidelity(a: PointerCoupledState | FirstOrderState, b: PointerCoupledState | FirstOrderState) -> float:
    """|<a|b>|^2 / (<a|a><b|b>) on system ⊗ pointer."""
    if a.delta != b.delta:
        raise ValueError("states use different pointer widths")
    ta, tb = a.terms(), b.terms()
    cross = state_inner(ta, tb, a.delta)
    norm_a = state_inner(ta, ta, a.delta).real
    norm_b = state_inner(tb, tb, a.delta).real
    return abs(cross) ** 2 / (norm_a * norm_b)


def reduced_density_matrix(st: PointerCoupledState) -> ComplexArray:
    """System state after tracing out the pointer."""
    rho = np.zeros((st.dim, st.dim), dtype=np.complex128)
    for bi in st.branches:
        for bj in st.branches:
            w = _pointer_overlap(bi.shift, 0, bj.shift, 0, st.delta)
            rho += bi.coeff * bj.coeff.conjugate() * w * np.outer(bi.ket.amps, bj.ket.amps.conj())
    return rho


def marginal_density(st: PointerCoupledState, q: ArrayLike) -> NDArray[np.float64]:
    """Readout density Σ_b |coeff_b|^2 N(q; shift_b, Δ^2)."""
    q = np.asarray(q, dtype=float)
    total = np.zeros_like(q)
    for b in st.branches:
        total = total + abs(b.coeff) ** 2 * GaussianPointer(st.delta, b.shift).density(q)
    return total


def _post_states(st: PointerCoupledState, q0: NDArray[np.float64]) -> ComplexArray:
    """Normalized system states conditioned on each reading, shape (n, dim)."""
    shifts = st.shifts
    log_w = -((q0[:, None] - shifts[None, :]) ** 2) / (4.0 * st.delta**2)
    log_w -= log_w.max(axis=1, keepdims=True)
    coeffs = np.array([b.coeff for b in st.branches])
    kets = np.array([b.ket.amps for b in st.branches])
    states = (np.exp(log_w) * coeffs[None, :]) @ kets
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    return states


def readout(st: PointerCoupledState, rng: np.random.Generator) -> ReadoutRecord:
    """Sample a reading q0 exactly and return the back-acted system state."""
    index = int(rng.choice(len(st.branches), p=st.weights / st.weights.sum()))
    q0 = float(rng.normal(st.branches[index].shift, st.delta))
    post = Ket(_post_states(st, np.array([q0]))[0])
    kept = abs(inner(st.reference, post)) ** 2
    return ReadoutRecord(q0=q0, post_system=post, flipped=kept < 0.5, flip_weight=max(0.0, 1.0 - kept))


def readout_batch(st: PointerCoupledState, rng: np.random.Generator, size: int) -> ReadoutBatch:
    """Vectorised readout of `size` independent copies of st."""
    weights = st.weights / st.weights.sum()
    index = rng.choice(len(st.branches), size=size, p=weights)
    q0 = rng.normal(st.shifts[index], st.delta)
    states = _post_states(st, q0)
    kept = np.abs(states @ st.reference.amps.conj()) ** 2
    return ReadoutBatch(q0=q0, post_states=states, flip_weights=np.clip(1.0 - kept, 0.0, None))


def flip_probability(g0: float, delta: float) -> float:
    """Probability that a σ_z readout on |σ_x=+1> leaves the system in |σ_x=-1>.

    Equals (1 - exp(-g0^2 / 2Δ^2)) / 2 <= g0^2/Δ^2.
    """
    if not delta > 0:
        raise NonPositiveDelta(f"pointer width must be positive, got {delta}")
    st = couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(delta))
    rho = reduced_density_matrix(st)
    return float(np.real(np.vdot(KET_X_MINUS.amps, rho @ KET_X_MINUS.amps)))


def flip_probability_quadrature(g0: float, delta: float) -> float:
    """Quadrature of ∫ p(q0) |<σ_x=-1|post(q0)>|^2 dq0 over ±8Δ."""
    if not delta > 0:
        raise NonPositiveDelta(f"pointer width must be positive, got {delta}")
    st = couple(KET_X_PLUS, SIGMA_Z, g0, GaussianPointer(delta))

    def integrand(q: float) -> float:
        post = _post_states(st, np.array([q]))[0]
        return float(marginal_density(st, q)) * abs(np.vdot(KET_X_MINUS.amps, post)) ** 2

    half_width = 8.0 * delta + abs(g0)
    value, _ = integrate.quad(integrand, -half_width, half_width, epsabs=1e-12, limit=200)
    return float(value)


def _selected_amplitudes(st: PointerCoupledState, post: Ket) -> NDArray[np.complex128]:
    if post.dim != st.dim:
        raise DimMismatch(post.dim, st.dim)
    unit = post.normalized()
    return np.array([b.coeff * inner(unit, b.ket) for b in st.branches])


def _conditional_moments(st: PointerCoupledState, post: Ket) -> tuple[float, float, float]:
    """(selection probability, E[q0 | post], E[q0^2 | post])."""
    amps = _selected_amplitudes(st, post)
    z = m1 = m2 = 0j
    for i, bi in enumerate(st.branches):
        for j, bj in enumerate(st.branches):
            a = amps[i] * amps[j].conjugate() * _pointer_overlap(bi.shift, 0, bj.shift, 0, st.delta)
            mid = (bi.shift + bj.shift) / 2.0
            z += a
            m1 += a * mid
            m2 += a * (mid**2 + st.delta**2)
    prob = z.real
    if prob <= EPS_OVERLAP**2:
        raise OrthogonalSelection(f"postselection probability {prob:.3e} after coupling")
    return prob, m1.real / prob, m2.real / prob


def postselection_probability(st: PointerCoupledState, post: Ket) -> float:
    """Probability that a strong measurement after coupling finds `post`."""
    amps = _selected_amplitudes(st, post)
    z = sum(
        amps[i] * amps[j].conjugate() * _pointer_overlap(bi.shift, 0, bj.shift, 0, st.delta)
        for i, bi in enumerate(st.branches)
        for j, bj in enumerate(st.branches)
    )
    return float(np.real(z))


def conditional_pointer_mean(st: PointerCoupledState, post: Ket) -> float:
    """Exact E[q0 | postselection on `post` succeeds]."""
    return _conditional_moments(st, post)[1]


def conditional_pointer_variance(st: PointerCoupledState, post: Ket) -> float:
    _, mean, second = _conditional_moments(st, post)
    return second - mean**2
