import itertools

import pytest

from leakaudit import Auditor, bf_model_leaks, encode, evaluate, validate_model
from leakaudit.core import ModelError
from leakaudit.genbench import (
    KINDS,
    QbfInstance,
    ShapeParams,
    from_qbf,
    parse_qbf,
    random_model,
)


@pytest.mark.parametrize("kind", KINDS)
def test_random_model_reproducible(kind):
    a = random_model(7, 5, kind)
    b = random_model(7, 5, kind)
    assert a == b
    c = random_model(8, 5, kind)
    assert a != c


@pytest.mark.parametrize("kind", KINDS)
def test_random_model_well_formed(kind):
    for seed in range(20):
        space, partition, model = random_model(seed, 6, kind)
        validate_model(model, space)
        assert partition.open | partition.private == frozenset(range(6))
        assert not partition.open & partition.private
        assert partition.sensitive in partition.private
        assert len(partition.open) >= 1


def test_random_threshold_nonconstant():
    for seed in range(15):
        _, _, model = random_model(seed, 5, "threshold")
        seen = {evaluate(model, x)
                for x in itertools.product((False, True), repeat=5)}
        assert len(seen) > 1


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        random_model(1, 1, "formula")
    with pytest.raises(ValueError):
        random_model(1, 4, "perceptron")


def test_shape_params_respected():
    shape = ShapeParams(hidden_units=4)
    _, _, model = random_model(3, 5, "threshold", shape)
    assert len(model.layers[0]) == 4


def test_parse_qbf_basic():
    q = parse_qbf("exists y1 y2; forall z1;\n(y1 | z1) & !(y2 & z1)")
    assert q.exists_vars == ("y1", "y2")
    assert q.forall_vars == ("z1",)


def test_parse_qbf_errors():
    with pytest.raises(ModelError):
        parse_qbf("exists y;\ny &")
    with pytest.raises(ModelError):
        parse_qbf("exists y; forall y;\ny")
    with pytest.raises(ModelError):
        parse_qbf("some y;\ny")
    with pytest.raises(ModelError):
        parse_qbf("exists y;\nq")


def test_qbf_overlap_rejected():
    from leakaudit.core import Var
    with pytest.raises(ModelError):
        QbfInstance(("a",), ("a",), Var(0))


def test_from_qbf_tautology_matrix():
    # forall z. z | !z holds, so the instance is true and the model leaks
    q = parse_qbf("exists y; forall z;\nz | !z")
    space, partition, model, expected = from_qbf(q)
    assert expected is True
    assert Auditor(encode(model, space), partition, model).audit_model().leaks


def test_from_qbf_false_instance():
    # no choice of y makes z true for both z values
    q = parse_qbf("exists y; forall z;\ny & z")
    space, partition, model, expected = from_qbf(q)
    assert expected is False
    assert not Auditor(encode(model, space), partition, model).audit_model().leaks


def test_from_qbf_agrees_with_oracle():
    q = parse_qbf("exists y1 y2; forall z1 z2;\n(y1 | z1) & (y2 | !z1) & (y1 | y2 | z2)")
    space, partition, model, expected = from_qbf(q)
    leaks, _ = bf_model_leaks(model, space, partition)
    assert leaks == expected
    verdict = Auditor(encode(model, space), partition, model).audit_model()
    assert verdict.leaks == expected


def test_from_qbf_partition_shape():
    q = parse_qbf("exists a b; forall c;\na & b & c")
    space, partition, model, _ = from_qbf(q)
    assert space.names[:2] == ("a", "b")
    assert partition.open == frozenset({0, 1})
    assert partition.sensitive == space.n - 1
    assert partition.protected_value is True
