"""Command-line front end.

Exit codes are a stable contract: 0 no leakage / success, 3 leakage
detected, 1 usage or input error, 2 oracle failure or internal error.
Reports redact private-profile literals of audited individuals unless
--reveal-private is given.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from pathlib import Path

from . import __version__
from .audit import Auditor, IndividualVerdict, IterationCapExceeded, ModelVerdict
from .bridge import OracleFailure, SatContext
from .core import (
    FeatureSpace,
    Individual,
    ModelError,
    ProfilePartition,
    render_literals,
    restrict,
)
from .encoding import CapacityError, encode, write_dimacs
from .explain import minimal_explanation
from .genbench import KINDS, ShapeParams, from_qbf, parse_qbf, random_model
from .interchange import parse_model, serialize_model
from .oracle import (
    BudgetError,
    OracleBudget,
    bf_individual_leaks,
    bf_model_leaks,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2
EXIT_LEAK = 3

REPORT_VERSION = 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, BudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleFailure, IterationCapExceeded, CapacityError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; keep 2 reserved for internal errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="leakaudit",
        description="Audit Boolean decision processes for sensitive-feature "
                    "leakage via abductive explanations and SAT queries.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, model: bool = True) -> None:
        if model:
            p.add_argument("--model", required=True, help="interchange document path")
        p.add_argument("--mode", choices=("theorem", "strict"), default="theorem")
        p.add_argument("--deterministic", action="store_true",
                       help="pin the solver seed to 0, ignoring LEAKAUDIT_SEED")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--output", default=None, help="write the report here instead of stdout")
        p.add_argument("--oracle-budget", type=int, default=16,
                       help="max features for brute-force enumeration")
        p.add_argument("--conflict-budget", type=int, default=1_000_000)
        p.add_argument("--reveal-private", action="store_true",
                       help="include private-profile literals of audited individuals")
        p.add_argument("--dump-cnf", default=None, metavar="PATH",
                       help="also write the model's CNF in DIMACS form")

    p = sub.add_parser("audit-individual", help="audit one individual")
    common(p)
    p.add_argument("--assign", required=True,
                   help="full assignment, e.g. E=1,D=0,S=1,H=1")
    p.set_defaults(func=cmd_audit_individual)

    p = sub.add_parser("audit-model", help="audit the whole decision process")
    common(p)
    p.set_defaults(func=cmd_audit_model)

    p = sub.add_parser("explain", help="minimal explanation for an individual's decision")
    common(p)
    p.add_argument("--assign", required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("oracle-check", help="cross-check SAT verdicts against brute force")
    common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("gen", help="generate an interchange document")
    common(p, model=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-features", type=int, default=6)
    p.add_argument("--kind", choices=KINDS, default="formula")
    p.add_argument("--from-qbf", default=None, metavar="FILE",
                   help="build a leakage instance from an exists-forall file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dump-cnf", help="write the model's CNF and variable map")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dump_cnf)
    return parser


# ---------------------------------------------------------------------------
# helpers

def _seed(args) -> int:
    if args.deterministic:
        return 0
    return int(os.environ.get("LEAKAUDIT_SEED", "0"))


def _load(args) -> tuple[FeatureSpace, ProfilePartition, object]:
    text = Path(args.model).read_text()
    return parse_model(text)


def _parse_assignment(text: str, space: FeatureSpace) -> Individual:
    values: dict[int, bool] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"malformed assignment item {part!r} (want NAME=0|1)")
        name, _, raw = part.partition("=")
        if raw.strip() not in ("0", "1"):
            raise ValueError(f"assignment value for {name.strip()!r} must be 0 or 1")
        values[space.index(name.strip())] = raw.strip() == "1"
    missing = [space.names[i] for i in range(space.n) if i not in values]
    if missing:
        raise ValueError(f"partial assignment; missing feature(s): {', '.join(missing)}")
    return tuple(values[i] for i in range(space.n))


def _redact(x: Individual, space: FeatureSpace, partition: ProfilePartition,
            reveal: bool) -> dict[str, bool | None]:
    out: dict[str, bool | None] = {}
    for i, name in enumerate(space.names):
        if reveal or i in partition.open:
            out[name] = x[i]
        else:
            out[name] = None  # redacted
    return out


def _config_echo(args) -> dict:
    return {
        "model_path": getattr(args, "model", None),
        "mode": args.mode,
        "deterministic": args.deterministic,
        "format": args.format,
        "oracle_budget": args.oracle_budget,
        "conflict_budget": args.conflict_budget,
        "seed": _seed(args),
    }


def _emit(args, report: dict, text: str) -> None:
    payload = json.dumps(report, indent=2) if args.format == "structured" else text
    if args.output:
        Path(args.output).write_text(payload + "\n")
    else:
        print(payload)


def _auditor(args, enc, partition, model) -> Auditor:
    return Auditor(enc, partition, model, mode=args.mode, seed=_seed(args),
                   conflict_budget=args.conflict_budget)


def _individual_report(args, verdict: IndividualVerdict, space: FeatureSpace,
                       partition: ProfilePartition) -> tuple[dict, str]:
    reveal = args.reveal_private
    witnesses = {
        "lppae": None if verdict.lppae is None else {
            "literals": render_literals(verdict.lppae.literal_set, space),
            "class": verdict.lppae.profile_class,
            "decision": verdict.lppae.decision,
            "unique": False,
        },
        "shield": None if verdict.shield is None
        else _redact(verdict.shield, space, partition, reveal),
    }
    report = {
        "report_version": REPORT_VERSION,
        "command": "audit-individual",
        "config_echo": _config_echo(args),
        "verdict": {
            "leaks": verdict.leaks,
            "decision": verdict.decision,
            "annotation": verdict.annotation,
            "scope": "individuals carrying the protected value",
        },
        "witnesses": witnesses,
        "stats": {"oracle_calls": verdict.stats.oracle_calls,
                  "elapsed_s": round(verdict.stats.elapsed, 6)},
    }
    lines = [f"verdict: {'LEAKS' if verdict.leaks else 'no leakage'}",
             f"decision: {verdict.decision}"]
    if verdict.annotation:
        lines.append(f"note: {verdict.annotation}")
    if verdict.lppae is not None:
        lines.append(f"LPPAE: {render_literals(verdict.lppae.literal_set, space)} "
                     f"[{verdict.lppae.profile_class}] (one of possibly several)")
    if verdict.shield is not None:
        vals = _redact(verdict.shield, space, partition, reveal)
        rendered = ", ".join(f"{k}={'?' if v is None else int(v)}"
                             for k, v in vals.items())
        lines.append(f"shield: {rendered}")
    lines.append(f"stats: {verdict.stats.oracle_calls} oracle calls, "
                 f"{verdict.stats.elapsed:.3f}s")
    return report, "\n".join(lines)


def _model_report(args, verdict: ModelVerdict, space: FeatureSpace,
                  partition: ProfilePartition) -> tuple[dict, str]:
    reveal = args.reveal_private
    cover = [{"open_literals": render_literals(
                  restrict(expl.literal_set, "open", partition), space),
              "literals": render_literals(expl.literal_set, space),
              "decision": d}
             for expl, d in verdict.cover]
    counter = None
    if verdict.counterexample is not None:
        counter = {
            "assignment": _redact(verdict.counterexample, space, partition, reveal),
            "open_profile": render_literals(
                restrict(verdict.counterexample, "open", partition), space),
        }
    report = {
        "report_version": REPORT_VERSION,
        "command": "audit-model",
        "config_echo": _config_echo(args),
        "verdict": {
            "leaks": verdict.leaks,
            "iterations": verdict.iterations,
            "annotations": verdict.annotations,
            "scope": "individuals carrying the protected value",
        },
        "witnesses": {"counterexample": counter, "cover": cover},
        "stats": {"oracle_calls": verdict.stats.oracle_calls,
                  "elapsed_s": round(verdict.stats.elapsed, 6)},
    }
    lines = [f"verdict: {'LEAKS' if verdict.leaks else 'no leakage'}",
             f"iterations: {verdict.iterations}"]
    if counter is not None:
        lines.append(f"counterexample open profile: {counter['open_profile']}")
    else:
        lines.append(f"cover ({len(cover)} blocking record(s)):")
        for rec in cover:
            lines.append(f"  {rec['open_literals']} -> decision {rec['decision']}")
    for note in verdict.annotations:
        lines.append(f"note: {note}")
    lines.append(f"stats: {verdict.stats.oracle_calls} oracle calls, "
                 f"{verdict.stats.elapsed:.3f}s")
    return report, "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands

def cmd_audit_individual(args) -> int:
    space, partition, model = _load(args)
    x = _parse_assignment(args.assign, space)
    enc = encode(model, space)
    if args.dump_cnf:
        write_dimacs(enc, args.dump_cnf)
    verdict = _auditor(args, enc, partition, model).audit_individual(x)
    report, text = _individual_report(args, verdict, space, partition)
    _emit(args, report, text)
    return EXIT_LEAK if verdict.leaks else EXIT_OK


def cmd_audit_model(args) -> int:
    space, partition, model = _load(args)
    enc = encode(model, space)
    if args.dump_cnf:
        write_dimacs(enc, args.dump_cnf)
    verdict = _auditor(args, enc, partition, model).audit_model()
    report, text = _model_report(args, verdict, space, partition)
    _emit(args, report, text)
    return EXIT_LEAK if verdict.leaks else EXIT_OK


def cmd_explain(args) -> int:
    from .core import evaluate
    space, partition, model = _load(args)
    x = _parse_assignment(args.assign, space)
    enc = encode(model, space)
    if args.dump_cnf:
        write_dimacs(enc, args.dump_cnf)
    ctx = SatContext(enc, seed=_seed(args), conflict_budget=args.conflict_budget)
    d = evaluate(model, x)
    expl = minimal_explanation(x, d, {}, ctx, partition)
    report = {
        "report_version": REPORT_VERSION,
        "command": "explain",
        "config_echo": _config_echo(args),
        "verdict": {"decision": d},
        "witnesses": {"explanation": {
            "literals": render_literals(expl.literal_set, space),
            "class": expl.profile_class,
            "unique": False,
        }},
        "stats": {"oracle_calls": ctx.solve_calls},
    }
    text = (f"decision: {d}\nexplanation: {render_literals(expl.literal_set, space)} "
            f"[{expl.profile_class}] (one of possibly several)")
    _emit(args, report, text)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    space, partition, model = _load(args)
    budget = OracleBudget(args.oracle_budget)
    budget.check(space.n)  # refuse before doing any work
    enc = encode(model, space)
    if args.dump_cnf:
        write_dimacs(enc, args.dump_cnf)
    auditor = _auditor(args, enc, partition, model)
    sat_model = auditor.audit_model()
    bf_model, _ = bf_model_leaks(model, space, partition, budget)
    mismatches = []
    if sat_model.leaks != bf_model:
        mismatches.append({"level": "model", "sat": sat_model.leaks, "oracle": bf_model})
    checked = 0
    for x in itertools.product((False, True), repeat=space.n):
        if x[partition.sensitive] != partition.protected_value:
            continue
        sat_leak = auditor.audit_individual(x).leaks
        bf_leak = bf_individual_leaks(model, space, partition, x, budget)
        checked += 1
        if sat_leak != bf_leak:
            mismatches.append({"level": "individual",
                               "assignment": list(x), "sat": sat_leak, "oracle": bf_leak})
    agree = not mismatches
    report = {
        "report_version": REPORT_VERSION,
        "command": "oracle-check",
        "config_echo": _config_echo(args),
        "verdict": {"agree": agree, "individuals_checked": checked,
                    "model_leaks": sat_model.leaks},
        "witnesses": {"mismatches": mismatches},
        "stats": {"oracle_calls": sat_model.stats.oracle_calls},
    }
    text = (f"agreement: {'yes' if agree else 'NO'}\n"
            f"model leaks: {sat_model.leaks}\n"
            f"sensitive individuals checked: {checked}")
    if mismatches:
        text += f"\nmismatches: {len(mismatches)}"
    _emit(args, report, text)
    return EXIT_OK if agree else EXIT_INTERNAL


def cmd_gen(args) -> int:
    if args.from_qbf:
        q = parse_qbf(Path(args.from_qbf).read_text())
        space, partition, model, expected = from_qbf(
            q, OracleBudget(args.oracle_budget))
        doc = serialize_model(space, partition, model)
        if expected is not None:
            print(f"expected leakage: {expected}", file=sys.stderr)
    else:
        space, partition, model = random_model(
            args.seed, args.n_features, args.kind, ShapeParams())
        doc = serialize_model(space, partition, model)
    if args.out:
        Path(args.out).write_text(doc + "\n")
    else:
        print(doc)
    return EXIT_OK


def cmd_dump_cnf(args) -> int:
    space, partition, model = _load(args)
    enc = encode(model, space)
    write_dimacs(enc, args.out)
    print(f"wrote {len(enc.clauses)} clauses over {enc.num_vars} variables to {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
