import csv

import numpy as np
import pytest

from leakaudit_exporter import (
    BinarizationSpec,
    ColumnRule,
    DataError,
    SpecError,
    ingest_and_binarize,
)
from leakaudit_exporter.sample import bundled_csv, generate_rows, write_sample


def test_spec_parses(spec):
    assert spec.label == "credit_risk"
    assert spec.sensitive_feature == "purpose:car"
    assert spec.sensitive_value is False
    assert "purpose:car" not in spec.open_feature_names()


def test_feature_names_deterministic(spec):
    assert spec.feature_names() == spec.feature_names()
    assert len(set(spec.feature_names())) == len(spec.feature_names())


def test_dataset_shape(dataset, spec):
    assert dataset.X.shape == (300, len(spec.feature_names()))
    assert dataset.X.dtype == bool
    assert set(np.unique(dataset.y)) == {0, 1}
    assert set(dataset.open_names) | set(dataset.private_names) \
        == set(dataset.feature_names)
    assert not set(dataset.open_names) & set(dataset.private_names)
    assert dataset.sensitive_feature in dataset.private_names


def test_one_hot_rows_sum_to_one(dataset):
    purpose_cols = [i for i, n in enumerate(dataset.feature_names)
                    if n.startswith("purpose:")]
    assert (dataset.X[:, purpose_cols].sum(axis=1) == 1).all()


def test_threshold_rule_applies(dataset):
    rows = generate_rows()
    a = dataset.feature_names.index("A")
    for i, row in enumerate(rows):
        assert dataset.X[i, a] == (row["age"] >= 35)


def test_sample_reproducible(tmp_path):
    write_sample(tmp_path / "a.csv")
    assert (tmp_path / "a.csv").read_text() == bundled_csv().read_text()


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def test_missing_column_rejected(tmp_path, spec):
    p = tmp_path / "bad.csv"
    _write_csv(p, ["age", "credit_risk"], [[30, 1]])
    with pytest.raises(DataError, match="missing column"):
        ingest_and_binarize(p, spec)


def test_unmapped_column_rejected(tmp_path, spec):
    p = tmp_path / "bad.csv"
    header = ["age", "gender", "job", "housing", "savings", "purpose",
              "credit_risk", "extra"]
    _write_csv(p, header, [[30, "male", 2, "own", 500, "car", 1, "x"]])
    with pytest.raises(DataError, match="not mapped"):
        ingest_and_binarize(p, spec)


def test_unseen_category_rejected(tmp_path, spec):
    p = tmp_path / "bad.csv"
    header = ["age", "gender", "job", "housing", "savings", "purpose", "credit_risk"]
    _write_csv(p, header, [[30, "male", 2, "own", 500, "boat", 1]])
    with pytest.raises(DataError, match="unseen category"):
        ingest_and_binarize(p, spec)


def test_non_numeric_threshold_value_rejected(tmp_path, spec):
    p = tmp_path / "bad.csv"
    header = ["age", "gender", "job", "housing", "savings", "purpose", "credit_risk"]
    _write_csv(p, header, [["old", "male", 2, "own", 500, "car", 1]])
    with pytest.raises(DataError, match="non-numeric"):
        ingest_and_binarize(p, spec)


def test_bad_label_rejected(tmp_path, spec):
    p = tmp_path / "bad.csv"
    header = ["age", "gender", "job", "housing", "savings", "purpose", "credit_risk"]
    _write_csv(p, header, [[30, "male", 2, "own", 500, "car", "good"]])
    with pytest.raises(DataError, match="label"):
        ingest_and_binarize(p, spec)


def test_spec_rejects_duplicate_names():
    with pytest.raises(SpecError, match="unique"):
        BinarizationSpec(
            label="y", open_columns=("a",),
            columns={"a": ColumnRule("threshold", threshold=1, name="X"),
                     "b": ColumnRule("threshold", threshold=2, name="X")},
            sensitive_feature="X", sensitive_value=True)


def test_spec_rejects_open_sensitive():
    with pytest.raises(SpecError, match="non-open"):
        BinarizationSpec(
            label="y", open_columns=("a",),
            columns={"a": ColumnRule("identity")},
            sensitive_feature="a", sensitive_value=True)


def test_spec_rejects_unknown_rule():
    with pytest.raises(SpecError, match="unknown rule"):
        BinarizationSpec.from_yaml(
            "label: y\nopen: []\ncolumns:\n  a: {rule: scale}\n"
            "sensitive: {feature: a, value: true}\n")


def test_identity_rule(tmp_path):
    spec = BinarizationSpec.from_yaml(
        "label: y\nopen: [a]\ncolumns:\n"
        "  a: {rule: identity}\n  b: {rule: identity}\n"
        "sensitive: {feature: b, value: true}\n")
    p = tmp_path / "d.csv"
    _write_csv(p, ["a", "b", "y"], [[1, 0, 1], [0, "true", 0]])
    ds = ingest_and_binarize(p, spec)
    assert ds.X.tolist() == [[True, False], [False, True]]
