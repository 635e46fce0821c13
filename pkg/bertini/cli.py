"""
Command-line entry point.

Usage:
    python -m bertini predict --field 2^1 --n 2 --k 1 --r 12
    python -m bertini run --preset plane_lines
    python -m bertini run --field 2^1 --n 2 --k 1 --degrees 6 --mode sampled --trials 4000 --seed 42
    python -m bertini stats --preset plane_density_d6 --records data/out/plane_density_d6/trials.jsonl
    python -m bertini verify

Exit codes: 0 ok (failed comparisons are data), 1 execution error or failed
verify check, 2 invalid flags, 3 undecided trials above the alarm threshold.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from bertini import records as rec_io
from bertini.experiment import ExperimentConfig, compare, run, summarize
from bertini.gf import EnumerationBoundExceeded, field_create, parse_field
from bertini.groebner import GroebnerBudgetExceeded
from bertini.mpoly import parse_form
from bertini.predict import build_report
from bertini.smoothness import VarietyDesc
from bertini.verify import run_checks
from config.paths import OutLayout
from config.settings import load_presets

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_ALARM = 0, 1, 2, 3


def die(msg: str, code: int = EXIT_ERROR) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    sys.exit(code)


# ============================================================================
# Parser
# ============================================================================

def _point(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"point must look like 1,0,0, got {text!r}") from None


def _add_setup_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="Named preset from config/experiments.yaml")
    p.add_argument("--field", help="Base field as p^s (e.g. 2^1, 3^2)")
    p.add_argument("--n", type=int, help="Ambient projective dimension")
    p.add_argument("--k", type=int, help="Number of hypersurface sections")
    p.add_argument("--degrees", type=int, nargs="+", help="Degrees d_1 <= ... <= d_k")
    p.add_argument("--variety", help="File holding g (text format); X = V(g) instead of P^n")


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    _add_setup_flags(p)
    p.add_argument("--mode", choices=["exhaustive", "sampled"])
    p.add_argument("--trials", type=int, help="Sampled trials (trial cap with --min-smooth)")
    p.add_argument("--seed", type=int, help="Master seed (64-bit)")
    p.add_argument("--oracle", choices=["gb", "brute", "both"])
    p.add_argument("--extension-bound", type=int, help="E for the brute-force oracle")
    p.add_argument("--count-extensions", type=int, help="Count points over F_{q^e} for e up to this")
    p.add_argument("--contain", type=_point, action="append", help="Rational point to contain, e.g. 1,0,0")
    p.add_argument("--avoid", type=_point, action="append", help="Rational point to avoid")
    p.add_argument("--min-smooth", type=int, help="Stop once this many smooth trials were seen")
    p.add_argument("--budget", type=int, help="Groebner pair budget (overrides BERTINI_BUDGET)")
    p.add_argument("--r", type=int, help="Truncation degree for the prediction")
    p.add_argument("--csv", help="Comparison CSV path")
    p.add_argument("--out-root", default="data/out", help="Output root (default: data/out)")
    p.add_argument("--name", help="Run label under the output root (default: preset name or 'run')")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bertini", description="Smooth complete intersections over finite fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="Exact predictions as JSON")
    _add_setup_flags(p)
    p.add_argument("--r", type=int, help="Truncation degree (default: limits.yaml)")
    p.add_argument("--z", type=int, default=0, help="z for the explicit error bound (default: 0)")
    p.add_argument("--contain-count", type=int, default=0, help="Number of points to contain")
    p.add_argument("--avoid-count", type=int, default=0, help="Number of points to avoid")
    p.add_argument("--count-extensions", type=int, default=2, help="Model means over F_{q^e}, e up to this")
    p.add_argument("--out", help="Write JSON here instead of stdout")

    p = sub.add_parser("run", help="Run an experiment, write records / summary / comparison")
    _add_experiment_flags(p)
    p.add_argument("--records", help="JSONL output path")
    p.add_argument("--summary", help="Summary JSON path")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="Worker count")
    p.add_argument("--processes", action="store_true", help="Use a process pool instead of threads")
    p.add_argument("--timings", action="store_true", help="Record per-trial wall time (ms)")
    p.add_argument("--quiet", action="store_true", help="No progress lines")

    p = sub.add_parser("stats", help="Recompute the summary and comparison from a JSONL file")
    _add_experiment_flags(p)
    p.add_argument("--records", required=True, help="JSONL input path")
    p.add_argument("--summary", help="Summary JSON path")

    p = sub.add_parser("verify", help="Run the built-in invariant suite")
    p.add_argument("--full", action="store_true", help="Include the plane cubic oracle suite")
    return parser


# ============================================================================
# Flag handling
# ============================================================================

FLAG_KEYS = {
    "field": "field", "n": "n", "k": "k", "degrees": "degrees", "variety": "variety",
    "mode": "mode", "trials": "trials", "seed": "seed", "oracle": "oracle",
    "extension_bound": "extension_bound", "count_extensions": "count_extensions",
    "contain": "contain", "avoid": "avoid", "min_smooth": "min_smooth",
}


def _preset(args) -> dict:
    if not getattr(args, "preset", None):
        return {}
    presets = load_presets()
    if args.preset not in presets:
        die(f"unknown preset {args.preset!r} (known: {', '.join(sorted(presets))})", EXIT_USAGE)
    return dict(presets[args.preset])


def experiment_config(args, timings: bool = False) -> ExperimentConfig:
    raw = _preset(args)
    for flag, key in FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            raw[key] = value
    for key in ("n", "k", "degrees"):
        if key not in raw:
            die(f"--{key} is required (or use --preset)", EXIT_USAGE)
    if raw.get("mode") == "exhaustive" and args.trials is not None:
        die("--trials conflicts with --mode exhaustive", EXIT_USAGE)
    if raw.get("mode") == "exhaustive":
        raw.pop("trials", None)
    if args.budget is not None and args.budget <= 0:
        die("--budget must be positive", EXIT_USAGE)
    try:
        return ExperimentConfig.from_mapping(raw, budget=args.budget, timings=timings)
    except EnumerationBoundExceeded as e:
        die(str(e), EXIT_ERROR)
    except GroebnerBudgetExceeded as e:
        die(_budget_message(e), EXIT_ERROR)
    except (ValueError, TypeError, OSError) as e:
        die(str(e), EXIT_USAGE)


def _budget_message(e: GroebnerBudgetExceeded) -> str:
    # X is certified once, before any trial
    return (f"cannot certify the variety is smooth: Groebner budget {e.budget} exhausted "
            f"after {e.processed} reductions (raise --budget or BERTINI_BUDGET)")


def _variety(args, F, n: int) -> VarietyDesc:
    if not args.variety:
        return VarietyDesc.projective_space(n)
    g = parse_form(Path(args.variety).read_text(), F, n + 1)
    return VarietyDesc.hypersurface(g)


def _report_for(config: ExperimentConfig, r: Optional[int]):
    return build_report(
        config.variety, config.field, config.k, r,
        degrees=config.degrees,
        contain=len(config.contain), avoid=len(config.avoid),
        count_extensions=max(config.count_extensions, 1),
    )


def _print_p3_note(report) -> None:
    p3 = report.p3_average
    if p3 is None:
        return
    print(f"[info] P^3 curve average: model {p3['unsimplified']} "
          f"(~{float(p3['unsimplified']):.4f}), simplified form {p3['simplified']}", file=sys.stderr)
    if p3["printed"] is not None:
        print(f"[info] printed value {p3['printed']} (~{float(p3['printed']):.4f})", file=sys.stderr)
    if p3["note"]:
        print(f"⚠️  {p3['note']}", file=sys.stderr)


# ============================================================================
# Subcommands
# ============================================================================

def cmd_predict(args) -> int:
    raw = _preset(args)
    field_text = args.field or raw.get("field")
    n = args.n if args.n is not None else raw.get("n")
    k = args.k if args.k is not None else raw.get("k")
    degrees = args.degrees if args.degrees is not None else raw.get("degrees")
    if field_text is None or n is None or k is None:
        die("--field, --n and --k are required (or use --preset)", EXIT_USAGE)
    if args.r is not None and args.r < 1:
        die("--r must be positive", EXIT_USAGE)
    try:
        p, s = parse_field(str(field_text))
        F = field_create(p, s)
        if args.variety is None and raw.get("variety"):
            args.variety = raw["variety"]
        X = _variety(args, F, int(n))
        report = build_report(
            X, F, int(k), args.r,
            degrees=degrees, z=args.z,
            contain=args.contain_count, avoid=args.avoid_count,
            count_extensions=args.count_extensions,
        )
    except EnumerationBoundExceeded as e:
        die(str(e), EXIT_ERROR)
    except GroebnerBudgetExceeded as e:
        die(_budget_message(e), EXIT_ERROR)
    except (ValueError, OSError) as e:
        die(str(e), EXIT_USAGE)

    payload = report.to_dict()
    if args.out:
        rec_io.write_json(Path(args.out), payload)
        print(f"[ok] wrote {args.out}", file=sys.stderr)
    else:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    _print_p3_note(report)
    return EXIT_OK


def cmd_run(args) -> int:
    config = experiment_config(args, timings=args.timings)
    if args.threads < 1:
        die("--threads must be positive", EXIT_USAGE)
    if args.r is not None and args.r < 1:
        die("--r must be positive", EXIT_USAGE)

    layout = OutLayout(Path(args.out_root))
    name = args.name or args.preset or "run"
    records_path = Path(args.records) if args.records else layout.path(name, "records")
    summary_path = Path(args.summary) if args.summary else layout.path(name, "summary")
    csv_path = Path(args.csv) if args.csv else layout.path(name, "comparison")
    prediction_path = layout.path(name, "prediction")

    try:
        report = _report_for(config, args.r)
        with rec_io.RecordWriter(records_path) as writer:
            summary, _ = run(config, threads=args.threads, on_record=writer,
                             processes=args.processes, verbose=not args.quiet)
        table = compare(summary, report)
    except (EnumerationBoundExceeded, GroebnerBudgetExceeded, OSError) as e:
        die(str(e), EXIT_ERROR)

    rec_io.write_json(summary_path, summary.to_dict())
    rec_io.write_json(prediction_path, report.to_dict())
    rec_io.write_comparison(csv_path, table)
    print(json.dumps(summary.to_dict(), ensure_ascii=False, indent=2))

    d = summary.density
    print(f"\n[ok] decided {summary.decided}/{summary.attempted}, undecided {summary.undecided}, "
          f"smooth {summary.smooth}", file=sys.stderr)
    if d is not None:
        print(f"[ok] smooth fraction {d.estimate} (~{float(d.estimate):.6f}), "
              f"Wilson [{d.low:.6f}, {d.high:.6f}]", file=sys.stderr)
    if summary.compared:
        print(f"[ok] oracle agreement {summary.agreements}/{summary.compared}", file=sys.stderr)
    if summary.empty_smooth:
        print(f"⚠️  {summary.empty_smooth} smooth trials have an empty intersection with X", file=sys.stderr)
    _print_p3_note(report)
    for _, row in table.iterrows():
        if row["pass"] is not None and not row["pass"]:
            print(f"⚠️  comparison failed: {row['metric']} (z = {row['z']})", file=sys.stderr)
    print(f"[ok] records  → {records_path}", file=sys.stderr)
    print(f"[ok] summary  → {summary_path}", file=sys.stderr)
    print(f"[ok] compare  → {csv_path}", file=sys.stderr)

    if summary.soundness_violations:
        return EXIT_ERROR
    if summary.alarm:
        return EXIT_ALARM
    return EXIT_OK


def cmd_stats(args) -> int:
    config = experiment_config(args)
    try:
        records = rec_io.read_records(Path(args.records))
        summary = summarize(records, config)
        table = compare(summary, _report_for(config, args.r))
    except (OSError, ValueError) as e:
        die(str(e), EXIT_ERROR)
    if args.summary:
        rec_io.write_json(Path(args.summary), summary.to_dict())
    if args.csv:
        rec_io.write_comparison(Path(args.csv), table)
    print(json.dumps(summary.to_dict(), ensure_ascii=False, indent=2))
    return EXIT_ALARM if summary.alarm else EXIT_OK


def cmd_verify(args) -> int:
    print("=" * 60)
    print("INVARIANT SUITE")
    print("=" * 60)
    results = run_checks(full=args.full)
    passed = sum(1 for _, ok in results if ok)
    print("\n" + "=" * 60)
    print(f"{passed}/{len(results)} checks passed")
    print("=" * 60)
    return EXIT_OK if passed == len(results) else EXIT_ERROR


COMMANDS = {
    "predict": cmd_predict,
    "run": cmd_run,
    "stats": cmd_stats,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args)
