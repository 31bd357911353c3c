"""Training, quantization, and interchange-document export.

Three classifier families: linear (logistic regression), sgd-linear (an
SGD-trained linear model), and small-nn (a small MLP). Trained float
models are quantized to integer threshold networks by scaling weights by
2^k and rounding; k escalates until the quantized labels agree with the
float labels on at least the configured fraction of the training data, and
the export is refused if the bound is unreachable.

For small-nn the exported object is a sign-activation network distilled
from the MLP: hidden units keep the MLP's first-layer weights with a hard
threshold, and the output layer is retrained on the binarized hidden
activations against the float model's own predictions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from sklearn.linear_model import LogisticRegression, SGDClassifier
from sklearn.metrics import accuracy_score, f1_score, precision_score, recall_score
from sklearn.model_selection import train_test_split
from sklearn.neural_network import MLPClassifier

from .binarize import Dataset

FAMILIES = ("linear", "sgd-linear", "small-nn")


class ExportError(RuntimeError):
    """Training or quantization could not produce a faithful export."""


@dataclass(frozen=True)
class ExportedModel:
    document: str  # interchange JSON
    metrics: dict[str, float]  # held-out accuracy/precision/recall/f1
    family: str
    scale: int
    agreement: float  # quantized-vs-float label agreement
    note: str | None = None


def _predict_layers(layers: list[list[tuple[np.ndarray, int]]],
                    X: np.ndarray) -> np.ndarray:
    values = X.astype(int)
    for units in layers:
        values = np.stack(
            [values @ w >= bias for w, bias in units], axis=1).astype(int)
    return values[:, 0]


def _quantize_linear(w: np.ndarray, b: float, k: int) -> tuple[np.ndarray, int]:
    weights = np.rint(w * (1 << k)).astype(int)
    bias = int(round(-b * (1 << k)))
    return weights, bias


def _train_float(dataset: Dataset, family: str, seed: int):
    if len(np.unique(dataset.y)) < 2:
        raise ExportError("label column has a single class; nothing to learn")
    if family == "linear":
        return LogisticRegression(max_iter=2000)
    if family == "sgd-linear":
        return SGDClassifier(loss="log_loss", max_iter=3000, tol=1e-4,
                             random_state=seed)
    if family == "small-nn":
        return MLPClassifier(hidden_layer_sizes=(6,), activation="tanh",
                             max_iter=4000, random_state=seed)
    raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")


def _held_out_metrics(clf, X_test, y_test) -> dict[str, float]:
    pred = clf.predict(X_test)
    return {
        "accuracy": float(accuracy_score(y_test, pred)),
        "precision": float(precision_score(y_test, pred, zero_division=0)),
        "recall": float(recall_score(y_test, pred, zero_division=0)),
        "f1": float(f1_score(y_test, pred, zero_division=0)),
    }


def _network_layers(clf, family: str, X: np.ndarray, seed: int, k: int
                    ) -> list[list[tuple[np.ndarray, int]]]:
    if family in ("linear", "sgd-linear"):
        w, b = clf.coef_[0], float(clf.intercept_[0])
        return [[_quantize_linear(w, b, k)]]
    # small-nn: binarize the hidden layer, retrain the output on it
    W1, b1 = clf.coefs_[0], clf.intercepts_[0]
    hidden = [(_quantize_linear(W1[:, j], float(b1[j]), k))
              for j in range(W1.shape[1])]
    H = np.stack([(X.astype(int) @ w >= bias) for w, bias in hidden],
                 axis=1).astype(int)
    target = clf.predict(X)
    if len(np.unique(target)) < 2 or H.std() == 0:
        # degenerate distillation: constant output unit matching the
        # majority float prediction
        fire_always = int(np.mean(target) >= 0.5)
        bias = 0 if fire_always else len(hidden) + 1
        return [hidden, [(np.zeros(len(hidden), dtype=int), bias)]]
    out = LogisticRegression(max_iter=2000).fit(H, target)
    return [hidden, [_quantize_linear(out.coef_[0], float(out.intercept_[0]), k)]]


def _document(dataset: Dataset, layers) -> str:
    doc = {
        "features": list(dataset.feature_names),
        "open": list(dataset.open_names),
        "private": list(dataset.private_names),
        "sensitive": {"feature": dataset.sensitive_feature,
                      "value": dataset.sensitive_value},
        "labels": [0, 1],
        "model": {
            "kind": "threshold",
            "body": [[{"weights": [int(v) for v in w], "bias": int(bias)}
                      for w, bias in layer] for layer in layers],
        },
    }
    return json.dumps(doc, indent=2)


def train_and_quantize(dataset: Dataset, family: str, scale: int = 6,
                       agreement_bound: float = 0.95, max_scale: int = 12,
                       seed: int = 0) -> ExportedModel:
    if scale < 1:
        raise ValueError("scale must be at least 1")
    clf = _train_float(dataset, family, seed)
    X_train, X_test, y_train, y_test = train_test_split(
        dataset.X, dataset.y, test_size=0.25, random_state=seed,
        stratify=dataset.y)
    clf.fit(X_train, y_train)
    metrics = _held_out_metrics(clf, X_test, y_test)

    float_labels = clf.predict(dataset.X)
    best = None
    for k in range(scale, max_scale + 1):
        layers = _network_layers(clf, family, dataset.X, seed, k)
        agreement = float(np.mean(
            _predict_layers(layers, dataset.X) == float_labels))
        if best is None or agreement > best[1]:
            best = (layers, agreement, k)
        if agreement >= agreement_bound:
            break
    layers, agreement, k = best
    if agreement < agreement_bound:
        raise ExportError(
            f"quantized agreement {agreement:.3f} stayed below "
            f"{agreement_bound:.2f} up to scale {max_scale}; export refused")
    note = None
    if family == "small-nn":
        note = ("exported object is a sign-activation threshold network "
                "distilled from the trained MLP; audits apply to this "
                "network, not to the float model")
    return ExportedModel(document=_document(dataset, layers), metrics=metrics,
                         family=family, scale=k, agreement=agreement, note=note)
