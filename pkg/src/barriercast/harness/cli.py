"""Command line entry point: ``barriercast <subcommand> ...``.

Exit codes: 0 success, 2 invalid spec or parameters, 3 I/O or file format
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..edge_image import (degradation_from_dict, degrade, generate_scene, load_json,
                          scene_from_dict)
from ..errors import BarrierCastError, PBMFormatError
from ..estimators import EstimatorConfig, Technique, estimate
from ..pnm import load_pbm, save_pbm
from .experiment import ExperimentSpec, bench, bench_to_csv, rows_to_csv, run_experiment
from .render import render_overlay

EXIT_SPEC = 2
EXIT_IO = 3


def _read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write_bytes(path, data: bytes):
    with open(path, "wb") as fh:
        fh.write(data)


def _write_text(path, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _config(args) -> EstimatorConfig:
    return EstimatorConfig(args.technique, n=args.n, y=args.y, m=args.m, b=args.b,
                           max_iterations=args.max_iterations, epsilon=args.epsilon)


def cmd_generate(args):
    if args.scene:
        spec = scene_from_dict(load_json(args.scene))
    else:
        spec = scene_from_dict(args.preset)
    image, truths = generate_scene(spec)
    _write_bytes(args.output, save_pbm(image))
    if args.truth:
        doc = [{"centroid": list(t.centroid), "area": t.area} for t in truths]
        _write_text(args.truth, json.dumps(doc, indent=2) + "\n")


def cmd_degrade(args):
    image = load_pbm(_read_bytes(args.input))
    raw = load_json(args.spec)
    if args.seed is not None:
        raw = dict(raw, rng_seed=args.seed)
    _write_bytes(args.output, save_pbm(degrade(image, degradation_from_dict(raw))))


def cmd_estimate(args):
    image = load_pbm(_read_bytes(args.input))
    est, trace = estimate(image, tuple(args.inner), _config(args))
    doc = {
        "centroid": list(est.centroid),
        "area": est.area,
        "inner_point": list(est.inner_point),
        "iterations": len(trace.iterations),
        "converged": trace.converged,
        "work": trace.work,
    }
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")


def cmd_render(args):
    image = load_pbm(_read_bytes(args.input))
    _, trace = estimate(image, tuple(args.inner), _config(args))
    _write_bytes(args.output, render_overlay(image, trace, args.iteration))


def cmd_sweep(args):
    spec = ExperimentSpec.from_dict(load_json(args.spec), default_seed=args.seed)
    rows = run_experiment(spec, timing=args.timing, workers=args.workers)
    _write_text(args.output, rows_to_csv(rows))


def cmd_bench(args):
    spec = ExperimentSpec.from_dict(load_json(args.spec), default_seed=args.seed)
    _write_text(args.output, bench_to_csv(bench(spec, repeats=args.repeats, warmup=args.warmup)))


def _estimator_args(p):
    p.add_argument("input", help="edge image (PBM)")
    p.add_argument("--inner", type=int, nargs=2, metavar=("X", "Y"), required=True)
    p.add_argument("--technique", choices=[t.value for t in Technique], default="pixel_fill")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--y", type=int, default=2)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--max-iterations", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="barriercast", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomness the input spec leaves unset")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="rasterize a scene to a PBM edge image")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset")
    src.add_argument("--scene", help="scene JSON file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--truth", help="write per-region ground truth JSON here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("degrade", help="carve edge gaps into a PBM")
    p.add_argument("input")
    p.add_argument("--spec", required=True, help="degradation JSON file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("estimate", help="run one estimator, print JSON")
    _estimator_args(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("render", help="run one estimator and draw its trace (PPM)")
    _estimator_args(p)
    p.add_argument("--iteration", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("sweep", help="run an experiment grid, write CSV")
    p.add_argument("spec", help="experiment JSON file")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the wall_time_s column")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="median wall time and work counter per config")
    p.add_argument("spec", help="experiment JSON file")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--warmup", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except PBMFormatError as exc:
        print(f"barriercast: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BarrierCastError, json.JSONDecodeError) as exc:
        print(f"barriercast: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"barriercast: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
