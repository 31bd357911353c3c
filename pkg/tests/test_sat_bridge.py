import itertools

import pytest

from leakaudit import (
    OracleFailure,
    QueryConstraints,
    SatContext,
    encode,
    evaluate,
    literals_of,
    write_dimacs,
)
from leakaudit.core import (
    Const,
    FeatureSpace,
    FormulaModel,
    ThresholdModel,
    ThresholdUnit,
)
from leakaudit.encoding import CapacityError
from leakaudit.genbench import random_model
from leakaudit.satsolver import Solver

from conftest import D, E, H, S


def forced_labels(enc, bits):
    """Label indicators forced true under a total input assignment."""
    s = Solver(enc.num_vars)
    for c in enc.clauses:
        s.add_clause(list(c))
    assume = [enc.feature_literal(i, b) for i, b in enumerate(bits)]
    assert s.solve(assume)
    m = s.model()
    labels = [d for d, v in enc.label_var.items() if m[v] > 0]
    # also confirm each indicator is forced, not merely chosen
    for d, v in enc.label_var.items():
        opposite = -v if m[v] > 0 else v
        assert not s.solve(assume + [opposite])
    return labels


def assert_encoding_sound(model, space):
    enc = encode(model, space)
    assert set(enc.input_var.values()).isdisjoint(enc.label_var.values())
    for bits in itertools.product([False, True], repeat=space.n):
        assert forced_labels(enc, bits) == [evaluate(model, bits)]


def test_tutor_encoding_sound(tutor):
    space, _, model = tutor
    assert_encoding_sound(model, space)


def test_constant_model_encoding():
    space = FeatureSpace(("a", "b"))
    model = FormulaModel((0, 1), Const(False))
    assert_encoding_sound(model, space)


def test_threshold_and_gate():
    space = FeatureSpace(("x0", "x1"))
    model = ThresholdModel((0, 1), ((ThresholdUnit((1, 1), 2),),))
    for bits in itertools.product([False, True], repeat=2):
        assert evaluate(model, bits) == int(bits[0] and bits[1])
    assert_encoding_sound(model, space)


def test_threshold_negative_weights_sound():
    space = FeatureSpace(tuple("abcd"))
    model = ThresholdModel((0, 1), (
        (ThresholdUnit((2, -3, 1, -1), 0), ThresholdUnit((-2, 1, 4, -3), 1)),
        (ThresholdUnit((1, 1), 2),),
    ))
    assert_encoding_sound(model, space)


def test_multilabel_threshold_sound():
    # two final units: label index equals the number of firing units
    space = FeatureSpace(tuple("abc"))
    model = ThresholdModel((0, 1, 2), (
        (ThresholdUnit((1, 1, 1), 1), ThresholdUnit((1, 1, 1), 3)),
    ))
    assert evaluate(model, (False, False, False)) == 0
    assert evaluate(model, (True, False, False)) == 1
    assert evaluate(model, (True, True, True)) == 2
    assert_encoding_sound(model, space)


@pytest.mark.parametrize("kind", ["formula", "tree", "threshold"])
@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_random_models_encoding_sound(seed, kind):
    space, _, model = random_model(seed, 6, kind)
    assert_encoding_sound(model, space)


def test_find_individual_tata_shield_none(tutor, tutor_enc, tutor_ctx):
    q = QueryConstraints(fixed_literals={E: True, D: False, S: False},
                         required_label=1)
    assert tutor_ctx.find_individual(q) is None


def test_find_individual_titi_class(tutor, tutor_enc, tutor_ctx):
    space, _, model = tutor
    q = QueryConstraints(fixed_literals={E: True, D: True, S: False},
                         required_label=1)
    x = tutor_ctx.find_individual(q)
    assert x is not None
    assert x[E] and x[D] and not x[S]
    assert evaluate(model, x) == 1


def test_find_individual_constant_zero():
    space = FeatureSpace(("a", "b"))
    model = FormulaModel((0, 1), Const(False))
    ctx = SatContext(encode(model, space))
    assert ctx.find_individual(QueryConstraints(required_label=1)) is None


def test_check_validity_tutor(tutor_ctx):
    assert tutor_ctx.check_validity({D: True, H: True}, 1)
    assert not tutor_ctx.check_validity({}, 1)
    assert tutor_ctx.check_validity({E: True, D: True}, 1)


def test_full_assignment_always_valid(tutor, tutor_ctx):
    _, _, model = tutor
    for bits in itertools.product([False, True], repeat=4):
        assert tutor_ctx.check_validity(literals_of(bits), evaluate(model, bits))


def test_blocking_monotone(tutor, tutor_enc):
    space, _, model = tutor
    ctx = SatContext(tutor_enc)
    seen = []
    q = QueryConstraints(required_label=1)
    while True:
        x = ctx.find_individual(q)
        if x is None:
            break
        assert evaluate(model, x) == 1
        assert x not in seen  # earlier blocks still exclude
        seen.append(x)
        ctx.add_blocking_clause(literals_of(x))
    assert len(seen) == sum(
        evaluate(model, bits) == 1
        for bits in itertools.product([False, True], repeat=4))


def test_validity_refused_after_blocking(tutor_enc):
    ctx = SatContext(tutor_enc)
    ctx.add_blocking_clause({E: True})
    with pytest.raises(RuntimeError):
        ctx.check_validity({D: True}, 1)


def test_oracle_failure_distinct_from_none(tutor, tutor_enc):
    _, _, model = tutor
    ctx = SatContext(tutor_enc, conflict_budget=0)
    # block every label-1 individual so the query needs real search to refute
    for bits in itertools.product([False, True], repeat=4):
        if evaluate(model, bits) == 1:
            ctx.add_blocking_clause(literals_of(bits))
    with pytest.raises(OracleFailure):
        ctx.find_individual(QueryConstraints(required_label=1))


def test_capacity_error():
    space, _, model = random_model(1, 8, "threshold")
    with pytest.raises(CapacityError):
        encode(model, space, max_clauses=3)


def test_dimacs_dump(tmp_path, tutor, tutor_enc):
    space, _, _ = tutor
    out = tmp_path / "m.cnf"
    write_dimacs(tutor_enc, out)
    head = out.read_text().splitlines()[0].split()
    assert head[:2] == ["p", "cnf"]
    assert int(head[2]) == tutor_enc.num_vars
    assert int(head[3]) == len(tutor_enc.clauses)
    sidecar = (tmp_path / "m.cnf.vars.json").read_text()
    assert '"E"' in sidecar and '"labels"' in sidecar
