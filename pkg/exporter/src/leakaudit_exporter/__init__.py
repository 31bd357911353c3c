"""Trainer-exporter companion to the leakaudit auditor."""

__version__ = "0.1.0"

from .binarize import (
    BinarizationSpec,
    ColumnRule,
    DataError,
    Dataset,
    SpecError,
    ingest_and_binarize,
)
from .sample import bundled_csv, bundled_spec, generate_rows, write_sample
from .train import FAMILIES, ExportedModel, ExportError, train_and_quantize

__all__ = [name for name in dir() if not name.startswith("_")]
