import itertools
import json

import numpy as np
import pytest

import leakaudit
from leakaudit_exporter import ExportError, train_and_quantize
from leakaudit_exporter.train import _network_layers, _predict_layers

FAMILIES = ("linear", "sgd-linear", "small-nn")


@pytest.fixture(scope="module", params=FAMILIES)
def exported(request, dataset):
    return train_and_quantize(dataset, request.param)


def test_metrics_fields(exported):
    assert set(exported.metrics) == {"accuracy", "precision", "recall", "f1"}
    for v in exported.metrics.values():
        assert 0.0 <= v <= 1.0
    assert exported.metrics["accuracy"] >= 0.6  # the sample is learnable


def test_agreement_recorded_and_bounded(exported):
    assert exported.agreement >= 0.95
    assert exported.scale >= 1


def test_document_parses_under_primary_validation(exported):
    space, partition, model = leakaudit.parse_model(exported.document)
    assert model.kind == "threshold"
    assert partition.protected_value is False
    assert space.names[partition.sensitive] == "purpose:car"


def test_quantized_predictions_match_primary_evaluation(exported, dataset):
    space, partition, model = leakaudit.parse_model(exported.document)
    doc = json.loads(exported.document)
    layers = [[(np.array(u["weights"]), u["bias"]) for u in layer]
              for layer in doc["model"]["body"]]
    preds = _predict_layers(layers, dataset.X[:50])
    for row, expected in zip(dataset.X[:50], preds):
        assert leakaudit.evaluate(model, tuple(bool(v) for v in row)) == expected


def test_linear_export_is_single_unit(dataset):
    doc = json.loads(train_and_quantize(dataset, "linear").document)
    body = doc["model"]["body"]
    assert len(body) == 1 and len(body[0]) == 1
    assert all(isinstance(w, int) for w in body[0][0]["weights"])


def test_small_nn_export_is_two_layers(dataset):
    ex = train_and_quantize(dataset, "small-nn")
    body = json.loads(ex.document)["model"]["body"]
    assert len(body) == 2 and len(body[1]) == 1
    assert ex.note is not None and "distilled" in ex.note


def test_deterministic_given_seed(dataset):
    a = train_and_quantize(dataset, "linear", seed=1)
    b = train_and_quantize(dataset, "linear", seed=1)
    assert a.document == b.document and a.metrics == b.metrics


def test_single_class_refused(dataset):
    flat = dataset.__class__(X=dataset.X, y=np.zeros_like(dataset.y),
                             feature_names=dataset.feature_names,
                             open_names=dataset.open_names,
                             private_names=dataset.private_names,
                             sensitive_feature=dataset.sensitive_feature,
                             sensitive_value=dataset.sensitive_value)
    with pytest.raises(ExportError, match="single class"):
        train_and_quantize(flat, "linear")


def test_unreachable_agreement_refused(dataset):
    with pytest.raises(ExportError, match="refused"):
        train_and_quantize(dataset, "linear", agreement_bound=1.01)


def test_bad_arguments(dataset):
    with pytest.raises(ValueError):
        train_and_quantize(dataset, "tree-boost")
    with pytest.raises(ValueError):
        train_and_quantize(dataset, "linear", scale=0)


def test_degenerate_distillation_constant_unit():
    class FakeNet:
        coefs_ = [np.zeros((3, 2))]
        intercepts_ = [np.zeros(2)]

        def predict(self, X):
            return np.ones(len(X), dtype=int)

    X = np.array(list(itertools.product((0, 1), repeat=3)), dtype=bool)
    layers = _network_layers(FakeNet(), "small-nn", X, seed=0, k=6)
    assert _predict_layers(layers, X).tolist() == [1] * len(X)


def test_exported_model_audits_end_to_end(exported):
    space, partition, model = leakaudit.parse_model(exported.document)
    enc = leakaudit.encode(model, space)
    verdict = leakaudit.audit_model(enc, partition, model)
    assert verdict.leaks in (True, False)
    assert verdict.iterations >= 1
