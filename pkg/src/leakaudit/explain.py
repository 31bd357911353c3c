"""Subset-minimal abductive explanations and their open/private classification."""

from __future__ import annotations

from dataclasses import dataclass

from .bridge import SatContext
from .core import Individual, LiteralSet, ProfilePartition, literals_of, restrict


@dataclass(frozen=True)
class Explanation:
    literals: tuple[tuple[int, bool], ...]  # sorted (feature, polarity) pairs
    decision: int
    minimal: bool
    profile_class: str  # open | private | partial

    @property
    def literal_set(self) -> LiteralSet:
        return dict(self.literals)


def classify_explanation(literals: LiteralSet, partition: ProfilePartition) -> str:
    """Profile class of a literal set; the empty set counts as open."""
    vars_ = set(literals)
    if vars_ <= partition.open:
        return "open"
    if vars_ and vars_ <= partition.private:
        return "private"
    return "partial"


def minimal_explanation(x: Individual, decision: int, forbidden: LiteralSet,
                        ctx: SatContext, partition: ProfilePartition,
                        order: str = "index") -> Explanation | None:
    """Deletion-based subset-minimal explanation drawn from x's literals.

    Seeds with x minus the forbidden literals; returns None when that seed is
    not itself valid. order='private-first' drops private literals before
    open ones, biasing the result toward open literals.
    """
    seed = {i: v for i, v in literals_of(x).items() if i not in forbidden}
    if not ctx.check_validity(seed, decision):
        return None
    if order == "private-first":
        scan = sorted(seed, key=lambda i: (i not in partition.private, i))
    elif order == "index":
        scan = sorted(seed)
    else:
        raise ValueError(f"unknown deletion order: {order!r}")
    current = dict(seed)
    for i in scan:
        trial = {k: v for k, v in current.items() if k != i}
        if ctx.check_validity(trial, decision):
            current = trial
    return Explanation(
        literals=tuple(sorted(current.items())),
        decision=decision,
        minimal=True,
        profile_class=classify_explanation(current, partition),
    )


def is_fully_open(x: Individual, decision: int, ctx: SatContext,
                  partition: ProfilePartition) -> tuple[bool, Explanation | None]:
    """Whether x's decision admits an open explanation, with a minimal witness.

    An open explanation exists iff the full open profile is already valid;
    the witness is then minimized within the open profile.
    """
    open_part = restrict(x, "open", partition)
    if not ctx.check_validity(open_part, decision):
        return False, None
    forbidden = restrict(x, "private", partition)
    witness = minimal_explanation(x, decision, forbidden, ctx, partition)
    return True, witness
