"""Query layer over a compiled model: candidate search and validity proofs.

A SatContext owns one incremental solver loaded with a CnfEncoding. Fixed
literals and label constraints are passed as per-query assumptions; blocking
constraints are added as permanent clauses, so the satisfiable set only
shrinks over the context's lifetime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Individual, LiteralSet
from .encoding import CnfEncoding
from .satsolver import BudgetExceeded, Solver


class OracleFailure(Exception):
    """The solver gave up within its resource limit; verdict unknown."""


@dataclass
class QueryConstraints:
    fixed_literals: LiteralSet = field(default_factory=dict)
    required_label: int | None = None
    forbidden_label: int | None = None
    blocked: list[tuple[LiteralSet, int]] = field(default_factory=list)

    def __post_init__(self):
        if (self.required_label is not None
                and self.required_label == self.forbidden_label):
            raise ValueError("required_label and forbidden_label must differ")


class SatContext:
    """Single-owner incremental solver bound to one encoding."""

    def __init__(self, enc: CnfEncoding, seed: int = 0,
                 conflict_budget: int | None = 1_000_000):
        self.enc = enc
        self.conflict_budget = conflict_budget
        self._solver = Solver(enc.num_vars, seed=seed)
        for clause in enc.clauses:
            self._solver.add_clause(list(clause))
        self._blocked_count = 0
        self.solve_calls = 0
        self._validity_cache: dict[tuple[frozenset[tuple[int, bool]], int], bool] = {}

    def clone(self) -> "SatContext":
        return SatContext(self.enc, seed=self._solver._seed,
                          conflict_budget=self.conflict_budget)

    def add_blocking_clause(self, literals: LiteralSet, label: int | None = None) -> None:
        """Permanently exclude every individual satisfying literals (and label)."""
        clause = [-self.enc.feature_literal(i, v) for i, v in sorted(literals.items())]
        if label is not None:
            clause.append(-self.enc.label_var[label])
        self._solver.add_clause(clause)
        self._blocked_count += 1

    def new_selector(self) -> int:
        """Fresh guard variable for query-local exclusions."""
        return self._solver.new_var()

    def add_guarded_exclusion(self, selector: int, x: Individual) -> None:
        """Exclude the exact individual x, but only under the selector assumption.

        The clause is satisfied whenever the selector is free or false, so it
        never narrows ordinary queries or validity checks.
        """
        clause = [-selector] + [-self.enc.feature_literal(i, v)
                                for i, v in enumerate(x)]
        self._solver.add_clause(clause)

    def _solve(self, assumptions: list[int]) -> bool:
        self.solve_calls += 1
        try:
            return self._solver.solve(assumptions, conflict_budget=self.conflict_budget)
        except BudgetExceeded as exc:
            raise OracleFailure(str(exc)) from exc

    def find_individual(self, q: QueryConstraints,
                        extra_assumptions: list[int] = (),
                        canonical: bool = False) -> Individual | None:
        """A total individual meeting all constraints, or None (proved absent).

        canonical=True returns the lexicographically greatest solution
        (true before false, feature order), at up to n extra solver calls.
        """
        for literals, label in q.blocked:
            self.add_blocking_clause(literals, label)
        q.blocked = []
        assumptions = list(extra_assumptions)
        assumptions += [self.enc.feature_literal(i, v)
                        for i, v in sorted(q.fixed_literals.items())]
        if q.required_label is not None:
            assumptions.append(self.enc.label_var[q.required_label])
        if q.forbidden_label is not None:
            assumptions.append(-self.enc.label_var[q.forbidden_label])
        if not self._solve(assumptions):
            return None
        model = self._solver.model()
        if not canonical:
            return tuple(model[self.enc.input_var[i]] > 0
                         for i in range(self.enc.space.n))
        chosen: dict[int, bool] = dict(q.fixed_literals)
        for i in range(self.enc.space.n):
            if i in chosen:
                continue
            if model[self.enc.input_var[i]] > 0:
                chosen[i] = True
            elif self._solve(assumptions + [self.enc.feature_literal(i, True)]):
                model = self._solver.model()
                chosen[i] = True
            else:
                chosen[i] = False
            assumptions.append(self.enc.feature_literal(i, chosen[i]))
        return tuple(chosen[i] for i in range(self.enc.space.n))

    def check_validity(self, literals: LiteralSet, label: int) -> bool:
        """True iff every completion of the literal set receives the label.

        Validity quantifies over all individuals, so it refuses to run on a
        context whose solution set was narrowed by blocking clauses; audit
        code keeps a dedicated blocking-free context for validity work.
        """
        if self._blocked_count:
            raise RuntimeError("validity check on a context with blocking clauses")
        key = (frozenset(literals.items()), label)
        cached = self._validity_cache.get(key)
        if cached is not None:
            return cached
        assumptions = [self.enc.feature_literal(i, v)
                       for i, v in sorted(literals.items())]
        assumptions.append(-self.enc.label_var[label])
        result = not self._solve(assumptions)
        self._validity_cache[key] = result
        return result
