"""Binarization of tabular columns into Boolean features.

Three per-column rules: one-hot (categorical), threshold (numeric, emits
value >= t), and identity (already 0/1). The spec also fixes which source
columns feed the observer-visible features and which emitted feature is
the sensitive one.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

RULES = ("one-hot", "threshold", "identity")
_TRUTHY = {"1", "true", "yes"}
_FALSY = {"0", "false", "no"}


class SpecError(ValueError):
    """Malformed binarization spec."""


class DataError(ValueError):
    """CSV content that the spec cannot binarize."""


@dataclass(frozen=True)
class ColumnRule:
    rule: str
    threshold: float | None = None
    categories: tuple[str, ...] = ()
    name: str | None = None

    def emitted_names(self, column: str) -> list[str]:
        if self.rule == "one-hot":
            return [f"{column}:{c}" for c in self.categories]
        if self.rule == "threshold":
            return [self.name or f"{column}>={self.threshold:g}"]
        return [self.name or column]


@dataclass(frozen=True)
class BinarizationSpec:
    label: str
    open_columns: tuple[str, ...]
    columns: dict[str, ColumnRule]
    sensitive_feature: str
    sensitive_value: bool

    def __post_init__(self):
        names = self.feature_names()
        if len(names) != len(set(names)):
            raise SpecError("emitted feature names are not unique")
        unknown = set(self.open_columns) - set(self.columns)
        if unknown:
            raise SpecError(f"open columns not in the column map: {sorted(unknown)}")
        open_names = set(self.open_feature_names())
        if self.sensitive_feature not in names:
            raise SpecError(f"sensitive feature {self.sensitive_feature!r} is not emitted")
        if self.sensitive_feature in open_names:
            raise SpecError("sensitive feature must come from a non-open column")
        if self.label in self.columns:
            raise SpecError("label column must not appear in the column map")

    def feature_names(self) -> list[str]:
        out: list[str] = []
        for col, rule in self.columns.items():
            out.extend(rule.emitted_names(col))
        return out

    def open_feature_names(self) -> list[str]:
        out: list[str] = []
        for col in self.open_columns:
            out.extend(self.columns[col].emitted_names(col))
        return out

    @classmethod
    def from_yaml(cls, text: str) -> "BinarizationSpec":
        doc = yaml.safe_load(text)
        if not isinstance(doc, dict):
            raise SpecError("spec must be a mapping")
        extra = set(doc) - {"label", "open", "columns", "sensitive"}
        if extra:
            raise SpecError(f"unknown spec key(s): {sorted(extra)}")
        try:
            label = doc["label"]
            open_cols = tuple(doc["open"])
            col_doc = doc["columns"]
            sens = doc["sensitive"]
        except KeyError as exc:
            raise SpecError(f"missing spec key: {exc.args[0]}") from exc
        columns: dict[str, ColumnRule] = {}
        for col, raw in col_doc.items():
            if not isinstance(raw, dict) or "rule" not in raw:
                raise SpecError(f"column {col!r} needs a 'rule'")
            rule = raw["rule"]
            if rule not in RULES:
                raise SpecError(f"column {col!r}: unknown rule {rule!r}")
            if rule == "threshold" and "threshold" not in raw:
                raise SpecError(f"column {col!r}: threshold rule needs a 'threshold'")
            if rule == "one-hot" and not raw.get("categories"):
                raise SpecError(f"column {col!r}: one-hot rule needs 'categories'")
            columns[col] = ColumnRule(
                rule=rule,
                threshold=raw.get("threshold"),
                categories=tuple(str(c) for c in raw.get("categories", ())),
                name=raw.get("name"),
            )
        if not isinstance(sens, dict) or set(sens) != {"feature", "value"}:
            raise SpecError("sensitive must be {feature, value}")
        return cls(label=str(label), open_columns=open_cols, columns=columns,
                   sensitive_feature=str(sens["feature"]),
                   sensitive_value=bool(sens["value"]))


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray  # bool matrix, rows x features
    y: np.ndarray  # int labels 0/1
    feature_names: tuple[str, ...]
    open_names: tuple[str, ...]
    private_names: tuple[str, ...]
    sensitive_feature: str
    sensitive_value: bool


def _binarize_value(column: str, rule: ColumnRule, raw: str) -> list[bool]:
    if rule.rule == "one-hot":
        if raw not in rule.categories:
            raise DataError(f"column {column!r}: unseen category {raw!r}")
        return [raw == c for c in rule.categories]
    if rule.rule == "threshold":
        try:
            value = float(raw)
        except ValueError as exc:
            raise DataError(f"column {column!r}: non-numeric value {raw!r} "
                            "under a threshold rule") from exc
        return [value >= rule.threshold]
    lowered = raw.strip().lower()
    if lowered in _TRUTHY:
        return [True]
    if lowered in _FALSY:
        return [False]
    raise DataError(f"column {column!r}: identity rule expects a Boolean, got {raw!r}")


def ingest_and_binarize(csv_path: str | Path, spec: BinarizationSpec) -> Dataset:
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = (set(spec.columns) | {spec.label}) - set(header)
        if missing:
            raise DataError(f"CSV is missing column(s): {sorted(missing)}")
        unmapped = set(header) - set(spec.columns) - {spec.label}
        if unmapped:
            raise DataError(f"CSV column(s) not mapped by the spec: {sorted(unmapped)}")
        rows_x: list[list[bool]] = []
        rows_y: list[int] = []
        for lineno, row in enumerate(reader, start=2):
            bits: list[bool] = []
            for col, rule in spec.columns.items():
                bits.extend(_binarize_value(col, rule, row[col]))
            label_raw = row[spec.label].strip().lower()
            if label_raw not in _TRUTHY | _FALSY:
                raise DataError(f"line {lineno}: label must be 0/1, got {row[spec.label]!r}")
            rows_x.append(bits)
            rows_y.append(int(label_raw in _TRUTHY))
    if not rows_x:
        raise DataError("CSV has no data rows")
    names = tuple(spec.feature_names())
    open_names = tuple(spec.open_feature_names())
    private_names = tuple(n for n in names if n not in set(open_names))
    return Dataset(
        X=np.array(rows_x, dtype=bool),
        y=np.array(rows_y, dtype=int),
        feature_names=names,
        open_names=open_names,
        private_names=private_names,
        sensitive_feature=spec.sensitive_feature,
        sensitive_value=spec.sensitive_value,
    )
