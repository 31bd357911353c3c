"""Brute-force ground truth at desk scale.

Everything here enumerates the full assignment space directly from the model
definition and never touches the SAT path; it exists to validate that path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DecisionModel,
    FeatureSpace,
    Individual,
    LiteralSet,
    ProfilePartition,
    evaluate,
)

DEFAULT_MAX_FEATURES = 16


class BudgetError(Exception):
    """The instance is beyond the enumeration budget; refusing to run."""


@dataclass(frozen=True)
class OracleBudget:
    max_features: int = DEFAULT_MAX_FEATURES

    def check(self, n: int) -> None:
        if n > self.max_features:
            raise BudgetError(
                f"{n} features exceed the oracle budget of {self.max_features}")


def _bits(mask: int, n: int) -> Individual:
    # feature 0 is the most significant bit so enumeration by mask is
    # lexicographic in feature order
    return tuple(bool((mask >> (n - 1 - i)) & 1) for i in range(n))


def truth_table(model: DecisionModel, n: int) -> list[int]:
    """Label for every assignment, indexed by the lexicographic mask."""
    return [evaluate(model, _bits(mask, n)) for mask in range(1 << n)]


def bf_individual_leaks(model: DecisionModel, space: FeatureSpace,
                        partition: ProfilePartition, x: Individual,
                        budget: OracleBudget = OracleBudget()) -> bool:
    """Definition-level leakage check for one sensitive individual.

    Enumerates every completion of x's open profile and looks for a shield:
    same open profile, flipped sensitive value, same decision.
    """
    n = space.n
    budget.check(n)
    s, nu = partition.sensitive, partition.protected_value
    assert x[s] == nu, "leakage is defined for protected-value individuals"
    d = evaluate(model, x)
    private = sorted(partition.private - {s})
    for mask in range(1 << len(private)):
        xp = list(x)
        xp[s] = not nu
        for bit, i in enumerate(private):
            xp[i] = bool((mask >> bit) & 1)
        if evaluate(model, tuple(xp)) == d:
            return False
    return True


def bf_model_leaks(model: DecisionModel, space: FeatureSpace,
                   partition: ProfilePartition,
                   budget: OracleBudget = OracleBudget()
                   ) -> tuple[bool, Individual | None]:
    """First leaking individual in lexicographic order (true before false)."""
    n = space.n
    budget.check(n)
    s, nu = partition.sensitive, partition.protected_value
    # group decisions by open profile once: leak checks become set lookups
    open_idx = sorted(partition.open)
    table = truth_table(model, n)
    shielded: dict[tuple, set[int]] = {}
    for mask in range(1 << n):
        x = _bits(mask, n)
        if x[s] == nu:
            continue
        key = tuple(x[i] for i in open_idx)
        shielded.setdefault(key, set()).add(table[mask])
    for mask in range((1 << n) - 1, -1, -1):
        x = _bits(mask, n)
        if x[s] != nu:
            continue
        key = tuple(x[i] for i in open_idx)
        if table[mask] not in shielded.get(key, ()):
            return True, x
    return False, None


def bf_enumerate_min_explanations(model: DecisionModel, space: FeatureSpace,
                                  x: Individual,
                                  budget: OracleBudget = OracleBudget()
                                  ) -> set[frozenset[tuple[int, bool]]]:
    """All subset-minimal valid subsets of x's literals, by full enumeration.

    A subset S of x is invalid iff S is contained in the agreement mask of
    some assignment with a different label; validity is decided against the
    collected agreement masks.
    """
    n = space.n
    budget.check(n)
    d = evaluate(model, x)
    x_mask = sum(1 << (n - 1 - i) for i, v in enumerate(x) if v)
    wrong_masks = []
    for mask in range(1 << n):
        if evaluate(model, _bits(mask, n)) != d:
            wrong_masks.append(~(mask ^ x_mask) & ((1 << n) - 1))
    # keep only maximal agreement masks
    maximal = [m for m in wrong_masks
               if not any(m != o and (m | o) == o for o in wrong_masks)]

    def valid(subset: int) -> bool:
        return all(subset & ~m for m in maximal)

    result = set()
    for subset in range(1 << n):
        if not valid(subset):
            continue
        singles = [subset & ~(1 << b) for b in range(n) if subset & (1 << b)]
        if any(valid(sub) for sub in singles):
            continue
        lits = frozenset((i, x[i]) for i in range(n) if subset & (1 << (n - 1 - i)))
        result.add(lits)
    return result


def bf_is_valid(model: DecisionModel, space: FeatureSpace,
                literals: LiteralSet, d: int,
                budget: OracleBudget = OracleBudget()) -> bool:
    """Validity of a literal set by enumerating all completions."""
    n = space.n
    budget.check(n)
    free = [i for i in range(n) if i not in literals]
    base = [literals.get(i, False) for i in range(n)]
    for mask in range(1 << len(free)):
        xp = list(base)
        for bit, i in enumerate(free):
            xp[i] = bool((mask >> bit) & 1)
        if evaluate(model, tuple(xp)) != d:
            return False
    return True
