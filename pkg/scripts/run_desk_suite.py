"""Run the desk-scale routing and heuristic-gap suites and print their reports.

Usage:
    uv run python scripts/run_desk_suite.py [--replications 30] [--output results/desk/]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from vsn_alloc.harness.compare import compare_methods
from vsn_alloc.harness.io import load_spec, write_sweep_outputs
from vsn_alloc.harness.report import generate_text_report
from vsn_alloc.harness.runner import run_experiment

_EXPERIMENTS = Path(__file__).resolve().parent.parent / "data" / "experiments"
SUITES = ("routing.json", "heuristic_gap.json")


def main() -> None:
    parser = argparse.ArgumentParser(description="Run the desk-scale suites")
    parser.add_argument("--replications", type=int, default=None, help="Override per-spec replications")
    parser.add_argument("--output", type=str, default="results/desk/", help="Output directory")
    parser.add_argument("--workers", type=int, default=1, help="Process pool size")
    args = parser.parse_args()

    for filename in SUITES:
        spec = load_spec(_EXPERIMENTS / filename)
        update = {"workers": args.workers}
        if args.replications is not None:
            update["replications"] = args.replications
        spec = spec.model_validate({**spec.model_dump(), **update})

        print(f"Running {spec.name}: {len(spec.sweep_values)} value(s) x {spec.replications} seed(s)...")
        t0 = time.perf_counter()
        rows = run_experiment(spec)
        print(f"Done in {time.perf_counter() - t0:.1f}s")

        out_dir = Path(args.output) / spec.name
        write_sweep_outputs(rows, out_dir)
        print(f"Saved rows to {out_dir}")

        print()
        print(generate_text_report(rows, spec.name))
        if spec.method.value == "both":
            summary = compare_methods(rows)
            if summary.heuristic_faster_fraction is not None:
                print(f"Heuristic faster on {summary.heuristic_faster_fraction:.0%} of instances")


if __name__ == "__main__":
    main()
