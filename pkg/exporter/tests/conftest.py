import pytest

from leakaudit_exporter import (
    BinarizationSpec,
    ingest_and_binarize,
)
from leakaudit_exporter.sample import bundled_csv, bundled_spec


@pytest.fixture(scope="session")
def spec():
    return BinarizationSpec.from_yaml(bundled_spec().read_text())


@pytest.fixture(scope="session")
def dataset(spec):
    return ingest_and_binarize(bundled_csv(), spec)
