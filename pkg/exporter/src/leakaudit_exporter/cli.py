"""Command-line export front end."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .binarize import BinarizationSpec, DataError, SpecError, ingest_and_binarize
from .sample import bundled_csv, bundled_spec
from .train import FAMILIES, ExportError, train_and_quantize


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leakaudit-export",
        description="Train a classifier on a tabular CSV, quantize it to an "
                    "integer threshold network, and write an interchange "
                    "document plus a metrics sidecar.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("export", help="train, quantize, and export one model")
    p.add_argument("--csv", default=None,
                   help="input CSV (default: the bundled synthetic sample)")
    p.add_argument("--spec", default=None,
                   help="binarization spec YAML (default: the bundled spec)")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--scale", type=int, default=6,
                   help="initial quantization scale k (weights times 2^k)")
    p.add_argument("--max-scale", type=int, default=12)
    p.add_argument("--agreement", type=float, default=0.95,
                   help="minimum quantized-vs-float label agreement")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="interchange document path")
    p.set_defaults(func=cmd_export)
    return parser


def cmd_export(args) -> int:
    csv_path = Path(args.csv) if args.csv else bundled_csv()
    spec_path = Path(args.spec) if args.spec else bundled_spec()
    spec = BinarizationSpec.from_yaml(spec_path.read_text())
    dataset = ingest_and_binarize(csv_path, spec)
    exported = train_and_quantize(
        dataset, args.family, scale=args.scale,
        agreement_bound=args.agreement, max_scale=args.max_scale,
        seed=args.seed)
    out = Path(args.out)
    out.write_text(exported.document + "\n")
    sidecar = {
        "family": exported.family,
        "scale": exported.scale,
        "quantized_float_agreement": round(exported.agreement, 4),
        "metrics": {k: round(v, 4) for k, v in exported.metrics.items()},
        "note": exported.note,
    }
    sidecar_path = out.with_suffix(out.suffix + ".metrics.json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n")
    print(f"wrote {out} and {sidecar_path}")
    print(f"held-out metrics: " + ", ".join(
        f"{k}={v:.3f}" for k, v in exported.metrics.items()))
    print(f"quantized agreement: {exported.agreement:.3f} at scale {exported.scale}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, DataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ExportError as exc:
        print(f"export refused: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
