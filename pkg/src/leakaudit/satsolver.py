"""A small CDCL SAT solver with incremental clause addition and assumptions.

Literals use the DIMACS convention (signed non-zero ints). The solver is
fully deterministic for a given seed: decisions follow a VSIDS-style
activity order with index tie-breaking, and there is no ambient randomness.
"""

from __future__ import annotations

import heapq
import itertools


class BudgetExceeded(Exception):
    """The configured conflict budget was exhausted before a verdict."""


def _lit_index(lit: int) -> int:
    # 2v for positive literal of var v, 2v+1 for negative
    return 2 * lit if lit > 0 else -2 * lit + 1


class Solver:
    def __init__(self, num_vars: int = 0, seed: int = 0):
        self.num_vars = 0
        self.clauses: list[list[int]] = []  # problem + learned clauses
        self.watches: list[list[int]] = [[], []]  # lit index -> clause ids; 0/1 unused
        self.assign: list[int] = [0]        # var -> 0 unset, 1 true, -1 false
        self.level: list[int] = [0]
        self.reason: list[int] = [-1]       # var -> clause id or -1
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity: list[float] = [0.0]
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.phase: list[bool] = [False]    # saved phases; default false
        self.heap: list[tuple[float, int]] = []
        self.ok = True
        self._seed = seed
        self.conflicts = 0
        if num_vars:
            self.add_vars(num_vars)

    def add_vars(self, count: int) -> None:
        for _ in range(count):
            self.num_vars += 1
            v = self.num_vars
            self.assign.append(0)
            self.level.append(0)
            self.reason.append(-1)
            self.phase.append(False)
            # seed perturbs initial ordering only, not soundness
            self.activity.append(((v * 2654435761 + self._seed) % 1024) * 1e-9)
            self.watches.append([])
            self.watches.append([])
            heapq.heappush(self.heap, (-self.activity[v], v))

    def new_var(self) -> int:
        self.add_vars(1)
        return self.num_vars

    # -- assignment helpers --------------------------------------------------

    def value(self, lit: int) -> int:
        v = self.assign[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int) -> None:
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.phase[v] = lit > 0
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        bound = self.trail_lim[lvl]
        for lit in reversed(self.trail[bound:]):
            v = abs(lit)
            self.assign[v] = 0
            self.reason[v] = -1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    # -- clause management ---------------------------------------------------

    def add_clause(self, lits: list[int]) -> None:
        """Add a problem clause. Must be called outside solve()."""
        if not self.ok:
            return
        self._cancel_until(0)
        seen = set()
        clause = []
        for lit in lits:
            assert 1 <= abs(lit) <= self.num_vars, f"literal {lit} out of range"
            if -lit in seen:
                return  # tautology
            if lit in seen or self.value(lit) < 0:
                continue
            if self.value(lit) > 0:
                return  # satisfied at level 0
            seen.add(lit)
            clause.append(lit)
        if not clause:
            self.ok = False
            return
        if len(clause) == 1:
            self._enqueue(clause[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return
        self._attach(clause)

    def _attach(self, clause: list[int]) -> int:
        cid = len(self.clauses)
        self.clauses.append(clause)
        self.watches[_lit_index(-clause[0])].append(cid)
        self.watches[_lit_index(-clause[1])].append(cid)
        return cid

    # -- propagation ---------------------------------------------------------

    def _propagate(self) -> int:
        """Unit propagation; returns a conflicting clause id or -1."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            wl = self.watches[_lit_index(lit)]
            i = j = 0
            conflict = -1
            while i < len(wl):
                cid = wl[i]
                i += 1
                clause = self.clauses[cid]
                # ensure the false literal is at slot 1
                if clause[0] == -lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self.value(first) > 0:
                    wl[j] = cid
                    j += 1
                    continue
                # look for a new watch
                for k in range(2, len(clause)):
                    if self.value(clause[k]) >= 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[_lit_index(-clause[1])].append(cid)
                        break
                else:
                    wl[j] = cid
                    j += 1
                    if self.value(first) < 0:
                        conflict = cid
                        self.qhead = len(self.trail)
                        break
                    self._enqueue(first, cid)
            if conflict != -1:
                # keep the remaining watchers
                while i < len(wl):
                    wl[j] = wl[i]
                    i += 1
                    j += 1
                del wl[j:]
                return conflict
            del wl[j:]
        return -1

    # -- conflict analysis ---------------------------------------------------

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.assign[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        """First-UIP learning. Returns (learned clause, backjump level)."""
        learned = [0]  # slot 0 for the asserting literal
        seen = [False] * (self.num_vars + 1)
        counter = 0
        lit = 0
        idx = len(self.trail) - 1
        cid = conflict
        cur_level = len(self.trail_lim)
        while True:
            for q in self.clauses[cid] if lit == 0 else self.clauses[cid][1:]:
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] == cur_level:
                        counter += 1
                    else:
                        learned.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            lit = self.trail[idx]
            idx -= 1
            seen[abs(lit)] = False
            counter -= 1
            if counter == 0:
                break
            cid = self.reason[abs(lit)]
        learned[0] = -lit
        if len(learned) == 1:
            return learned, 0
        # backjump to the second-highest level in the clause
        max_i = max(range(1, len(learned)), key=lambda i: self.level[abs(learned[i])])
        learned[1], learned[max_i] = learned[max_i], learned[1]
        return learned, self.level[abs(learned[1])]

    # -- decision heuristic ----------------------------------------------------

    def _pick_branch_var(self) -> int:
        while self.heap:
            neg_act, v = heapq.heappop(self.heap)
            if self.assign[v] == 0 and -neg_act == self.activity[v]:
                return v
        for v in range(1, self.num_vars + 1):  # heap entries can go stale
            if self.assign[v] == 0:
                return v
        return 0

    # -- main search -----------------------------------------------------------

    def solve(self, assumptions: list[int] = (), conflict_budget: int | None = None) -> bool:
        """Decide satisfiability under assumptions.

        Raises BudgetExceeded if the conflict budget runs out; the verdict is
        then unknown and must not be treated as unsatisfiable.
        """
        if not self.ok:
            return False
        self._cancel_until(0)
        if self._propagate() != -1:
            self.ok = False
            return False
        budget_left = conflict_budget
        restart_limit, restart_iter = self._luby_gen()
        conflicts_here = 0
        while True:
            conflict = self._propagate()
            if conflict != -1:
                self.conflicts += 1
                conflicts_here += 1
                if budget_left is not None:
                    budget_left -= 1
                    if budget_left < 0:
                        self._cancel_until(0)
                        raise BudgetExceeded("conflict budget exhausted")
                if len(self.trail_lim) == 0:
                    self.ok = False
                    return False
                if len(self.trail_lim) <= len(assumptions):
                    # conflict inside the assumption prefix
                    self._cancel_until(0)
                    return False
                learned, back_level = self._analyze(conflict)
                back_level = max(back_level, self._assumption_floor(assumptions))
                self._cancel_until(back_level)
                if len(learned) == 1:
                    if self.value(learned[0]) < 0:
                        self._cancel_until(0)
                        if self.value(learned[0]) < 0:
                            self.ok = False
                            return False
                    if self.value(learned[0]) == 0:
                        self._enqueue(learned[0], -1)
                else:
                    cid = self._attach(learned)
                    if self.value(learned[0]) == 0:
                        self._enqueue(learned[0], cid)
                self.var_inc /= self.var_decay
                if conflicts_here >= restart_limit:
                    conflicts_here = 0
                    restart_limit = next(restart_iter)
                    self._cancel_until(self._assumption_floor(assumptions))
                continue
            # decide
            lvl = len(self.trail_lim)
            if lvl < len(assumptions):
                p = assumptions[lvl]
                val = self.value(p)
                if val < 0:
                    self._cancel_until(0)
                    return False
                self.trail_lim.append(len(self.trail))
                if val == 0:
                    self._enqueue(p, -1)
                continue
            v = self._pick_branch_var()
            if v == 0:
                return True  # all vars assigned: model found
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, -1)

    def _assumption_floor(self, assumptions) -> int:
        return min(len(assumptions), len(self.trail_lim))

    @staticmethod
    def _luby_gen():
        # doubling-with-reset restart schedule scaled by 64
        def schedule():
            u, v = 1, 1
            while True:
                yield 64 * v
                if (u & -u) == v:
                    u += 1
                    v = 1
                else:
                    v *= 2
        it = schedule()
        return next(it), it

    def model(self) -> list[int]:
        """Assignment after a satisfiable solve(): var -> 1/-1, index 0 unused."""
        return list(self.assign)
