"""Exception hierarchy for absim."""

from __future__ import annotations


class AbsimError(Exception):
    """Base class for every error raised by absim."""


class QuantumError(AbsimError):
    """Invalid state, operator or selection in the numerical core."""


class ZeroVector(QuantumError):
    """All amplitudes vanish, so the state cannot be normalized."""


class DimMismatch(QuantumError):
    """Operands live in spaces of different dimension."""

    def __init__(self, left: int, right: int) -> None:
        super().__init__(f"dimension mismatch: {left} != {right}")
        self.left = left
        self.right = right


class NonUnitary(QuantumError):
    """An operator that must be unitary is not."""


class NonHermitian(QuantumError):
    """An operator that must be hermitian is not."""


class OrthogonalSelection(QuantumError):
    """Pre- and postselection are orthogonal; the weak value is undefined."""


class OutOfRegime(QuantumError):
    """Parameters outside the validity range of an approximation."""


class NonPositiveDelta(QuantumError):
    """Pointer width must be strictly positive."""


class StepsOutOfRange(QuantumError):
    """Lattice translation by |steps| >= number of sites."""


class UnknownCut(QuantumError):
    """Cut name not declared in the network."""


class UnknownArm(QuantumError):
    """Arm label not declared in the network."""


class OrderViolation(QuantumError):
    """The source cut comes after the destination cut."""


class ConfigError(AbsimError):
    """Invalid scenario configuration (CLI exit code 2)."""


class ParseError(ConfigError, ValueError):
    """Malformed configuration text."""

    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ConfigInvalid(ConfigError, ValueError):
    """A configuration field holds an unacceptable value."""

    def __init__(self, field: str, message: str = "invalid value") -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class ZeroPostselection(AbsimError):
    """No trial passed the postselection (CLI exit code 3)."""
