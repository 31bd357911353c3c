import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leakaudit.satsolver import BudgetExceeded, Solver


def brute_sat(nv, clauses, assumptions=()):
    for bits in itertools.product([False, True], repeat=nv):
        def val(lit):
            return bits[abs(lit) - 1] == (lit > 0)
        if all(val(a) for a in assumptions) and \
                all(any(val(l) for l in c) for c in clauses):
            return True
    return False


def clause_strategy(nv):
    lit = st.integers(1, nv).map(lambda v: v).flatmap(
        lambda v: st.sampled_from([v, -v]))
    return st.lists(lit, min_size=1, max_size=3)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_matches_brute_force(data):
    nv = data.draw(st.integers(1, 7))
    clauses = data.draw(st.lists(clause_strategy(nv), min_size=0, max_size=25))
    assumptions = data.draw(st.lists(
        st.integers(1, nv).flatmap(lambda v: st.sampled_from([v, -v])),
        max_size=3, unique_by=abs))
    s = Solver(nv)
    for c in clauses:
        s.add_clause(list(c))
    got = s.solve(list(assumptions))
    assert got == brute_sat(nv, clauses, assumptions)
    if got:
        m = s.model()
        assert all((m[abs(a)] > 0) == (a > 0) for a in assumptions)
        assert all(any((m[abs(l)] > 0) == (l > 0) for l in c) for c in clauses)


def test_incremental_clause_addition():
    s = Solver(3)
    s.add_clause([1, 2])
    assert s.solve([])
    s.add_clause([-1])
    s.add_clause([-2])
    assert not s.solve([])  # 1|2 with both forced false


def test_assumptions_do_not_persist():
    s = Solver(2)
    s.add_clause([1, 2])
    assert not s.solve([-1, -2])
    assert s.solve([])
    assert s.solve([-1])


def test_pigeonhole_unsat():
    n, m = 5, 4
    s = Solver(n * m)
    var = lambda p, h: p * m + h + 1
    for p in range(n):
        s.add_clause([var(p, h) for h in range(m)])
    for h in range(m):
        for p1 in range(n):
            for p2 in range(p1 + 1, n):
                s.add_clause([-var(p1, h), -var(p2, h)])
    assert not s.solve([])


def test_conflict_budget_raises():
    n, m = 8, 7
    s = Solver(n * m)
    var = lambda p, h: p * m + h + 1
    for p in range(n):
        s.add_clause([var(p, h) for h in range(m)])
    for h in range(m):
        for p1 in range(n):
            for p2 in range(p1 + 1, n):
                s.add_clause([-var(p1, h), -var(p2, h)])
    with pytest.raises(BudgetExceeded):
        s.solve([], conflict_budget=5)


def test_seed_changes_search_not_verdict():
    clauses = [[1, 2, 3], [-1, -2], [-2, -3], [2, 3]]
    verdicts = set()
    for seed in range(4):
        s = Solver(3, seed=seed)
        for c in clauses:
            s.add_clause(list(c))
        verdicts.add(s.solve([]))
    assert verdicts == {True}
