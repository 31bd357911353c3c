"""Individual and whole-model privacy-leakage audits.

The individual audit searches for a shield: an individual with the same open
profile, the opposite sensitive value and the same decision. A minimal
explanation of the shield's decision is then a leakage-protected potentially
applicable explanation (LPPAE) for the subject; its absence means leakage.
The model audit iterates candidate sensitive individuals, covering each
discovered LPPAE's whole equivalence class with a blocking clause.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .bridge import QueryConstraints, SatContext
from .core import (
    DecisionModel,
    Individual,
    LiteralSet,
    ProfilePartition,
    evaluate,
    restrict,
)
from .encoding import CnfEncoding
from .explain import Explanation, minimal_explanation

MODES = ("theorem", "strict")


class IterationCapExceeded(RuntimeError):
    """Model audit looped past the class-count bound; indicates a blocking bug."""


@dataclass
class AuditStats:
    oracle_calls: int = 0
    elapsed: float = 0.0


@dataclass
class IndividualVerdict:
    subject: Individual
    decision: int
    leaks: bool
    lppae: Explanation | None
    shield: Individual | None
    annotation: str | None
    stats: AuditStats


@dataclass
class ModelVerdict:
    leaks: bool
    counterexample: Individual | None
    cover: list[tuple[Explanation, int]]
    iterations: int
    stats: AuditStats
    annotations: list[str] = field(default_factory=list)
    trace: list[tuple[Individual, int]] = field(default_factory=list)  # chosen x, decision per iteration


def lppae_applies(expl: Explanation, x: Individual, decision: int,
                  partition: ProfilePartition) -> bool:
    """All LPPAE conditions of expl with respect to x."""
    protected = (partition.sensitive, partition.protected_value)
    if protected in expl.literals:
        return False
    if expl.decision != decision:
        return False
    open_part = restrict(expl.literal_set, "open", partition)
    return all(x[i] == v for i, v in open_part.items())


class Auditor:
    """One audit run over a compiled model.

    Holds two solver contexts: a clean one for shield search and validity
    proofs (never narrowed), and, per audit_model call, a candidate context
    that accumulates blocking clauses.
    """

    def __init__(self, enc: CnfEncoding, partition: ProfilePartition,
                 model: DecisionModel, mode: str = "theorem",
                 deletion_order: str = "index", seed: int = 0,
                 conflict_budget: int | None = 1_000_000,
                 strict_retry_bound: int = 8):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.enc = enc
        self.partition = partition
        self.model = model
        self.mode = mode
        self.deletion_order = deletion_order
        self.seed = seed
        self.conflict_budget = conflict_budget
        self.strict_retry_bound = strict_retry_bound
        self.query_ctx = SatContext(enc, seed=seed, conflict_budget=conflict_budget)

    def _oracle_calls(self, *contexts: SatContext) -> int:
        return sum(c.solve_calls for c in contexts)

    # -- Search-LPPAE ---------------------------------------------------------

    def search_lppae(self, x: Individual,
                     decision: int | None = None
                     ) -> tuple[Explanation | None, Individual | None, str | None]:
        """LPPAE for x's decision, with the shield found, or (None, None, None).

        Preconditions: x[s] equals the protected value. In strict mode the
        explanation must avoid feature s entirely; when every retried shield
        resists that restriction the search falls back to theorem semantics
        and says so in the annotation.
        """
        part = self.partition
        d = evaluate(self.model, x) if decision is None else decision
        fixed = dict(restrict(x, "open", part))
        fixed[part.sensitive] = not part.protected_value
        q = QueryConstraints(fixed_literals=fixed, required_label=d)
        shield = self.query_ctx.find_individual(q)
        if shield is None:
            return None, None, None

        if self.mode == "theorem":
            expl = minimal_explanation(shield, d, {}, self.query_ctx, part,
                                       order=self.deletion_order)
            return expl, shield, None

        # strict: the explanation must not mention feature s at all
        first_shield = shield
        forbid = {part.sensitive: not part.protected_value}
        selector = None
        for _ in range(self.strict_retry_bound + 1):
            expl = minimal_explanation(shield, d, forbid, self.query_ctx, part,
                                       order=self.deletion_order)
            if expl is not None:
                return expl, shield, None
            if selector is None:
                selector = self.query_ctx.new_selector()
            self.query_ctx.add_guarded_exclusion(selector, shield)
            shield = self.query_ctx.find_individual(q, extra_assumptions=[selector])
            if shield is None:
                break
        expl = minimal_explanation(first_shield, d, {}, self.query_ctx, part,
                                   order=self.deletion_order)
        return expl, first_shield, "strict retries exhausted; theorem-mode fallback"

    # -- individual audit -------------------------------------------------------

    def audit_individual(self, x: Individual) -> IndividualVerdict:
        start = time.perf_counter()
        calls0 = self.query_ctx.solve_calls
        d = evaluate(self.model, x)
        part = self.partition
        if x[part.sensitive] != part.protected_value:
            return IndividualVerdict(
                subject=x, decision=d, leaks=False, lppae=None, shield=None,
                annotation="not sensitive: subject lacks the protected value",
                stats=AuditStats(0, time.perf_counter() - start))
        expl, shield, note = self.search_lppae(x, d)
        return IndividualVerdict(
            subject=x, decision=d, leaks=expl is None, lppae=expl, shield=shield,
            annotation=note,
            stats=AuditStats(self.query_ctx.solve_calls - calls0,
                             time.perf_counter() - start))

    # -- model audit --------------------------------------------------------------

    def audit_model(self, block_decision: bool = True) -> ModelVerdict:
        """Whole-process audit by LPPAE-equivalence-class blocking.

        block_decision=False reproduces the coarser blocking that omits the
        same-decision conjunct; it exists only for oracle comparisons.
        """
        start = time.perf_counter()
        part = self.partition
        candidate_ctx = SatContext(self.enc, seed=self.seed,
                                   conflict_budget=self.conflict_budget)
        calls0 = self.query_ctx.solve_calls
        cap = (1 << len(part.open)) * len(self.model.labels) + 1
        cover: list[tuple[Explanation, int]] = []
        annotations: list[str] = []
        trace: list[tuple[Individual, int]] = []
        iterations = 0
        protected = {part.sensitive: part.protected_value}
        while True:
            x = candidate_ctx.find_individual(
                QueryConstraints(fixed_literals=dict(protected)), canonical=True)
            if x is None:
                stats = AuditStats(
                    self.query_ctx.solve_calls - calls0 + candidate_ctx.solve_calls,
                    time.perf_counter() - start)
                return ModelVerdict(leaks=False, counterexample=None, cover=cover,
                                    iterations=iterations, stats=stats,
                                    annotations=annotations, trace=trace)
            iterations += 1
            if iterations > cap:
                raise IterationCapExceeded(
                    f"exceeded {cap} iterations; blocking is not making progress")
            d = evaluate(self.model, x)
            trace.append((x, d))
            expl, _shield, note = self.search_lppae(x, d)
            if note:
                annotations.append(note)
            if expl is None:
                stats = AuditStats(
                    self.query_ctx.solve_calls - calls0 + candidate_ctx.solve_calls,
                    time.perf_counter() - start)
                return ModelVerdict(leaks=True, counterexample=x, cover=cover,
                                    iterations=iterations, stats=stats,
                                    annotations=annotations, trace=trace)
            cover.append((expl, d))
            open_part = restrict(expl.literal_set, "open", part)
            candidate_ctx.add_blocking_clause(
                open_part, label=d if block_decision else None)


# -- module-level conveniences mirroring the operation names ------------------

def audit_individual(x: Individual, enc: CnfEncoding, partition: ProfilePartition,
                     model: DecisionModel, mode: str = "theorem",
                     **kwargs) -> IndividualVerdict:
    return Auditor(enc, partition, model, mode=mode, **kwargs).audit_individual(x)


def audit_model(enc: CnfEncoding, partition: ProfilePartition,
                model: DecisionModel, mode: str = "theorem",
                **kwargs) -> ModelVerdict:
    return Auditor(enc, partition, model, mode=mode, **kwargs).audit_model()
