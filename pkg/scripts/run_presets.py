#!/usr/bin/env python3
"""
Preset Runner

Runs named experiment presets from config/experiments.yaml and writes, per
preset, trials.jsonl / summary.json / prediction.json / comparison.csv under
the output root.

Features:
- Resumable: presets that already have a summary.json are skipped (--force reruns them)
- Presets run side by side on a thread pool; each one runs its trials on --threads workers

Usage:
    python scripts/run_presets.py
    python scripts/run_presets.py --presets plane_lines plane_conics --threads 4
    python scripts/run_presets.py --presets space_curves_33 --out-root data/out --force
"""
from __future__ import annotations
import sys
from pathlib import Path

# Add parent to path BEFORE importing project modules
sys.path.insert(0, str(Path(__file__).parent.parent))

import argparse
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Tuple

from bertini import records as rec_io
from bertini.experiment import ExperimentConfig, compare, run
from bertini.predict import build_report
from config.paths import OutLayout
from config.settings import load_presets


def scan_existing(layout: OutLayout, names: List[str]) -> List[str]:
    """Presets whose summary.json is already on disk."""
    return [name for name in names if layout.path(name, "summary", create=False).exists()]


def run_preset(name: str, raw: Dict, layout: OutLayout, threads: int) -> Tuple[str, Optional[dict], Optional[str]]:
    """
    Run one preset end to end.

    Returns:
        (name, short result dict, error message or None)
    """
    try:
        config = ExperimentConfig.from_mapping(raw)
        report = build_report(
            config.variety, config.field, config.k,
            degrees=config.degrees,
            contain=len(config.contain), avoid=len(config.avoid),
            count_extensions=max(config.count_extensions, 1),
        )
        with rec_io.RecordWriter(layout.path(name, "records")) as writer:
            summary, _ = run(config, threads=threads, on_record=writer, verbose=False)
        table = compare(summary, report)
        rec_io.write_json(layout.path(name, "summary"), summary.to_dict())
        rec_io.write_json(layout.path(name, "prediction"), report.to_dict())
        rec_io.write_comparison(layout.path(name, "comparison"), table)
    except Exception as e:
        return name, None, str(e)

    failed = [row["metric"] for _, row in table.iterrows() if row["pass"] is not None and not row["pass"]]
    return name, {
        "trials": summary.attempted,
        "smooth": summary.smooth,
        "undecided": summary.undecided,
        "density": float(summary.density.estimate) if summary.density else None,
        "predicted": float(report.truncated_density),
        "failed": failed,
        "alarm": summary.alarm,
        "violations": summary.soundness_violations,
    }, None


def main():
    parser = argparse.ArgumentParser(description='Run experiment presets')
    parser.add_argument('--presets', nargs='+', help='Presets to run (default: all)')
    parser.add_argument('--threads', type=int, default=2, help='Trial workers per preset (default: 2)')
    parser.add_argument('--parallel', type=int, default=1, help='Presets run at once (default: 1)')
    parser.add_argument('--out-root', default='data/out', help='Output root (default: data/out)')
    parser.add_argument('--force', action='store_true', help='Rerun presets that already have results')

    args = parser.parse_args()

    all_presets = load_presets()
    if args.presets:
        unknown = [p for p in args.presets if p not in all_presets]
        if unknown:
            print(f"❌ Unknown presets: {unknown}")
            print(f"   Known: {', '.join(sorted(all_presets))}")
            sys.exit(2)
        names = list(args.presets)
    else:
        names = list(all_presets)

    layout = OutLayout(Path(args.out_root))

    print("="*80)
    print("Preset Runner")
    print("="*80)
    print(f"Presets: {len(names)}")
    print(f"Threads per preset: {args.threads}, presets at once: {args.parallel}")
    print(f"Output root: {args.out_root}")
    print("="*80)
    print()

    done_before = [] if args.force else scan_existing(layout, names)
    tasks = [n for n in names if n not in done_before]
    if done_before:
        print(f"⏭️  Skipping {len(done_before)} presets with existing results: {', '.join(done_before)}")
    if not tasks:
        print("✅ All presets already completed!")
        return

    print(f"🚀 Running {len(tasks)} presets...")
    print()

    completed = 0
    failed = 0
    alarms = 0
    start_time = time.time()

    with ThreadPoolExecutor(max_workers=args.parallel) as executor:
        future_to_name = {
            executor.submit(run_preset, name, all_presets[name], layout, args.threads): name
            for name in tasks
        }

        for future in as_completed(future_to_name):
            name = future_to_name[future]
            position = completed + failed + 1
            try:
                _, result, error = future.result()
            except Exception as e:
                result, error = None, f"Exception: {e}"

            if error:
                failed += 1
                print(f"❌ [{position}/{len(tasks)}] {name} - {error[:120]}")
                continue

            completed += 1
            density = f"{result['density']:.6f}" if result['density'] is not None else "n/a"
            print(f"✅ [{position}/{len(tasks)}] {name}: {result['smooth']}/{result['trials']} smooth, "
                  f"density {density} (predicted {result['predicted']:.6f})")
            if result['failed']:
                print(f"   ⚠️  comparisons outside tolerance: {', '.join(result['failed'])}")
            if result['alarm']:
                alarms += 1
                print(f"   ⚠️  {result['undecided']} undecided trials above the alarm threshold")
            if result['violations']:
                print(f"   ❌ {result['violations']} oracle soundness violations")

    elapsed = time.time() - start_time
    print()
    print("="*80)
    print("Runs Complete!")
    print("="*80)
    print(f"✅ Completed: {completed}/{len(tasks)}")
    print(f"❌ Failed: {failed}/{len(tasks)}")
    if alarms:
        print(f"⚠️  Undecided alarms: {alarms}")
    print(f"⏱️  Time: {elapsed/60:.1f} minutes")
    print(f"💾 Output: {args.out_root}/{{preset}}/")
    print("="*80)

    if failed:
        sys.exit(1)


if __name__ == '__main__':
    main()
