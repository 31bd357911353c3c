"""Seeded synthetic credit-shaped sample so tests run without real data.

The columns mirror a small consumer-credit table: age, gender, job level,
housing, savings balance, credit purpose, and a good/bad risk label. The
label is a noisy linear function of the binarized columns so that linear
classifiers can learn it.
"""

from __future__ import annotations

import csv
import random
from importlib import resources
from pathlib import Path

COLUMNS = ("age", "gender", "job", "housing", "savings", "purpose", "credit_risk")

_GENDERS = ("male", "female")
_HOUSING = ("own", "rent", "free")
_PURPOSES = ("car", "furniture", "education", "business")


def generate_rows(seed: int = 0, rows: int = 300) -> list[dict[str, object]]:
    rng = random.Random(("credit-sample", seed, rows).__repr__())
    out = []
    for _ in range(rows):
        age = rng.randint(19, 70)
        gender = rng.choice(_GENDERS)
        job = rng.randint(0, 3)
        housing = rng.choices(_HOUSING, weights=(5, 3, 1))[0]
        savings = rng.randint(0, 80) * 100
        purpose = rng.choice(_PURPOSES)
        score = (1.2 * (age >= 35) + 0.8 * (savings >= 1000) + 0.6 * (job >= 2)
                 + 0.5 * (housing == "own") - 0.9 * (purpose == "car")
                 + rng.gauss(0.0, 0.6))
        out.append({
            "age": age, "gender": gender, "job": job, "housing": housing,
            "savings": savings, "purpose": purpose,
            "credit_risk": int(score > 1.2),
        })
    return out


def write_sample(path: str | Path, seed: int = 0, rows: int = 300) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        writer.writeheader()
        writer.writerows(generate_rows(seed, rows))


def bundled_csv() -> Path:
    return Path(resources.files("leakaudit_exporter") / "data" / "credit_sample.csv")


def bundled_spec() -> Path:
    return Path(resources.files("leakaudit_exporter") / "data" / "binarize.yaml")
