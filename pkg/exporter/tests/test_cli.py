import json

import pytest

import leakaudit
from leakaudit_exporter.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_export_bundled_sample(capsys, tmp_path):
    out = tmp_path / "model.json"
    code, stdout, _ = run(capsys, "export", "--family", "linear",
                          "--out", str(out))
    assert code == 0
    assert "held-out metrics" in stdout
    leakaudit.parse_model(out.read_text())
    sidecar = json.loads((tmp_path / "model.json.metrics.json").read_text())
    assert set(sidecar["metrics"]) == {"accuracy", "precision", "recall", "f1"}
    assert sidecar["quantized_float_agreement"] >= 0.95
    assert sidecar["family"] == "linear"


def test_export_custom_csv(capsys, tmp_path):
    from leakaudit_exporter.sample import bundled_spec, write_sample
    csv_path = tmp_path / "data.csv"
    write_sample(csv_path, seed=3, rows=200)
    out = tmp_path / "model.json"
    code, _, _ = run(capsys, "export", "--family", "sgd-linear",
                     "--csv", str(csv_path), "--spec", str(bundled_spec()),
                     "--out", str(out))
    assert code == 0
    leakaudit.parse_model(out.read_text())


def test_missing_csv_exit(capsys, tmp_path):
    code, _, err = run(capsys, "export", "--family", "linear",
                       "--csv", str(tmp_path / "nope.csv"),
                       "--out", str(tmp_path / "m.json"))
    assert code == 1
    assert "error:" in err


def test_refused_export_exit(capsys, tmp_path):
    code, _, err = run(capsys, "export", "--family", "linear",
                       "--agreement", "1.01",
                       "--out", str(tmp_path / "m.json"))
    assert code == 2
    assert "export refused" in err
    assert not (tmp_path / "m.json").exists()
