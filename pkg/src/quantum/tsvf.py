"""Two-state vectors: pre- and postselected states at one intermediate time."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from ..errors import DimMismatch, NonUnitary, OrthogonalSelection
from ..logging_config import get_logger
from .hilbert import KET_R, KET_X_PLUS, Ket, LinOp, apply, expectation, inner

logger = get_logger(__name__)

# Below this |<post|pre>| a weak value carries no significant digits.
EPS_OVERLAP = 1e-10


@dataclass(frozen=True, eq=False)
class TwoStateVector:
    """Forward-evolved preselection paired with backward-evolved postselection."""

    pre: Ket
    post: Ket

    def __post_init__(self) -> None:
        if self.pre.dim != self.post.dim:
            raise DimMismatch(self.pre.dim, self.post.dim)

    @property
    def dim(self) -> int:
        return self.pre.dim

    @property
    def overlap(self) -> complex:
        """<post|pre>, recomputed on every access."""
        return inner(self.post, self.pre)


def make_tsv(pre0: Ket, forward: LinOp, post1: Ket, backward: LinOp) -> TwoStateVector:
    """Evolve pre0 forward and post1 backward to the common cut.

    Args:
        pre0: Preselected state at the initial time.
        forward: Unitary from the initial time to the cut.
        post1: Postselected state at the final time.
        backward: Unitary from the cut to the final time.
    """
    for name, op in (("forward", forward), ("backward", backward)):
        if not op.unitary:
            raise NonUnitary(f"{name} evolution is not unitary")
    pre = apply(forward, pre0)
    post = apply(backward.adjoint(), post1)
    return TwoStateVector(pre=pre, post=post)


def weak_value(tsv: TwoStateVector, op: LinOp) -> complex:
    """<post|A|pre> / <post|pre>.

    Raises:
        OrthogonalSelection: if |<post|pre>| <= EPS_OVERLAP.
        DimMismatch: if A acts on another space.
    """
    if op.dim != tsv.dim:
        raise DimMismatch(op.dim, tsv.dim)
    overlap = tsv.overlap
    if abs(overlap) <= EPS_OVERLAP:
        logger.debug("weak value requested for orthogonal selection |overlap|=%g", abs(overlap))
        raise OrthogonalSelection(f"|<post|pre>| = {abs(overlap):.3e} <= {EPS_OVERLAP}")
    return inner(tsv.post, apply(op, tsv.pre)) / overlap


def weak_value_table(tsv: TwoStateVector, ops: Mapping[str, LinOp]) -> dict[str, complex]:
    return {name: weak_value(tsv, op) for name, op in ops.items()}


def strong_expectation(tsv: TwoStateVector, op: LinOp) -> complex:
    """Ordinary expectation in the preselected state, for comparison."""
    return expectation(op, tsv.pre.normalized())


def postselect_probability(pre: Ket, unitary: LinOp, post: Ket) -> float:
    """Born probability |<post|U|pre>|^2 of the selection step."""
    if not unitary.unitary:
        raise NonUnitary("selection evolution is not unitary")
    amplitude = inner(post, apply(unitary, pre))
    return min(1.0, abs(amplitude) ** 2)


def double_well_tsv(inverted: bool = False) -> TwoStateVector:
    """Preselected |σ_x=+1>, postselected |σ_z=+1> (or the reverse).

    Both orderings give weak values σ_x = σ_z = 1.
    """
    if inverted:
        return TwoStateVector(pre=KET_R, post=KET_X_PLUS)
    return TwoStateVector(pre=KET_X_PLUS, post=KET_R)
