"""Experiment sweeps, benchmarks, overlay rendering and the CLI."""

from .experiment import (BenchRow, ExperimentSpec, ResultRow, bench, bench_to_csv,
                         parse_bench_csv, parse_csv, rows_to_csv, run_experiment)
from .render import overlay, render_overlay

__all__ = [
    "BenchRow", "ExperimentSpec", "ResultRow", "bench", "bench_to_csv", "parse_bench_csv",
    "parse_csv", "rows_to_csv", "run_experiment", "overlay", "render_overlay",
]
