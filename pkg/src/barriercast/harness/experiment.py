"""Parameter sweeps against the oracle, CSV results and work benchmarks."""

from __future__ import annotations

import csv
import io
import itertools
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Optional

import numpy as np

from ..edge_image import (DegradationSpec, EdgeImage, PixelPos, SceneSpec, degrade,
                          generate_scene, scene_from_dict)
from ..errors import PreconditionError, SceneError
from ..estimators import EstimatorConfig, Technique, estimate
from ..oracle import compare, flood_region

SCHEMA_VERSION = "barriercast-results/1"
BENCH_SCHEMA_VERSION = "barriercast-bench/1"


@dataclass(frozen=True)
class ExperimentSpec:
    scene: SceneSpec
    scene_name: str = "custom"
    gap_widths: tuple = (1,)
    gap_counts: tuple = (0,)
    gap_seeds: tuple = (0,)
    techniques: tuple = (Technique.PIXEL_FILL,)
    n: tuple = (32,)
    y: tuple = (2,)
    m: tuple = (8,)
    b: tuple = (3,)
    max_iterations: int = 10
    epsilon: float = 0.5
    inner: object = "center"          # "center" | ("random", seed) | ((x, y), ...)
    repetitions: int = 1

    @classmethod
    def from_dict(cls, d: dict, default_seed: Optional[int] = None) -> "ExperimentSpec":
        """Build from the JSON experiment document described in the README."""
        if not isinstance(d, dict):
            raise SceneError("experiment spec must be a JSON object")
        known = {"scene", "degradation", "estimators", "inner", "repetitions"}
        extra = set(d) - known
        if extra:
            raise SceneError(f"unknown experiment fields {sorted(extra)}")
        if "scene" not in d:
            raise SceneError("experiment spec is missing field 'scene'")
        raw_scene = d["scene"]
        scene = scene_from_dict(raw_scene)
        if isinstance(raw_scene, str):
            name = raw_scene
        elif isinstance(raw_scene, dict) and "preset" in raw_scene:
            name = raw_scene["preset"]
        else:
            name = "custom"

        deg = d.get("degradation", {})
        est = d.get("estimators", {})

        def ints(block, key, default):
            v = block.get(key, default)
            if not isinstance(v, list):
                v = [v]
            try:
                return tuple(int(x) for x in v)
            except (TypeError, ValueError):
                raise SceneError(f"field {key!r} must hold integers, got {v!r}") from None

        seeds = ints(deg, "seeds", [default_seed if default_seed is not None else 0])
        techniques = est.get("techniques", ["pixel_fill"])
        if not isinstance(techniques, list):
            techniques = [techniques]
        try:
            techniques = tuple(Technique(t) for t in techniques)
        except ValueError as exc:
            raise SceneError(f"field 'techniques': {exc}") from None

        inner = d.get("inner", "center")
        if isinstance(inner, dict) and "random" in inner:
            seed = inner["random"]
            inner = ("random", int(default_seed if seed is None else seed))
        elif isinstance(inner, list):
            try:
                inner = tuple(PixelPos(int(p[0]), int(p[1])) for p in inner)
            except (TypeError, ValueError, IndexError):
                raise SceneError("field 'inner' must be a list of [x, y] pairs") from None
        elif inner != "center":
            raise SceneError("field 'inner' must be 'center', {'random': seed} or a point list")

        spec = cls(
            scene=scene, scene_name=name,
            gap_widths=ints(deg, "gap_widths", [1]),
            gap_counts=ints(deg, "gap_counts", [0]),
            gap_seeds=seeds,
            techniques=techniques,
            n=ints(est, "n", [32]), y=ints(est, "y", [2]), m=ints(est, "m", [8]), b=ints(est, "b", [3]),
            max_iterations=int(est.get("max_iterations", 10)),
            epsilon=float(est.get("epsilon", 0.5)),
            inner=inner,
            repetitions=int(d.get("repetitions", 1)),
        )
        spec.validate()
        return spec

    def validate(self):
        self.scene.validate()
        if self.repetitions < 1:
            raise SceneError("field 'repetitions' must be >= 1")
        for key in ("gap_widths", "gap_counts", "gap_seeds", "techniques", "n", "y", "m", "b"):
            if not getattr(self, key):
                raise SceneError(f"field {key!r} must not be empty")
        if any(w < 1 for w in self.gap_widths):
            raise SceneError("field 'gap_widths' must hold values >= 1")
        if any(c < 0 for c in self.gap_counts):
            raise SceneError("field 'gap_counts' must hold values >= 0")
        list(self.configs())  # EstimatorConfig validates each grid point

    def degradations(self):
        for width, count, seed in itertools.product(self.gap_widths, self.gap_counts, self.gap_seeds):
            yield width, count, seed

    def configs(self):
        for tech, n, y, m, b in itertools.product(self.techniques, self.n, self.y, self.m, self.b):
            yield EstimatorConfig(tech, n=n, y=y, m=m, b=b,
                                  max_iterations=self.max_iterations, epsilon=self.epsilon)


@dataclass(frozen=True)
class ResultRow:
    scene: str
    gap_width: int
    gap_count: int
    gap_seed: int
    technique: str
    n: int
    y: int
    m: int
    b: int
    max_iterations: int
    epsilon: float
    inner_x: int
    inner_y: int
    repetition: int
    status: str
    centroid_x: Optional[float] = None
    centroid_y: Optional[float] = None
    area: Optional[float] = None
    centroid_error: Optional[float] = None
    area_ratio: Optional[float] = None
    iterations: Optional[int] = None
    work: Optional[int] = None
    wall_time_s: Optional[float] = None


def inner_points(spec: ExperimentSpec, image: EdgeImage, truths) -> list:
    if isinstance(spec.inner, tuple) and spec.inner and spec.inner[0] == "random":
        if not truths:
            raise SceneError("scene has no region to place a random inner point in")
        pixels = sorted(truths[0].pixels, key=lambda p: (p.y, p.x))
        rng = np.random.default_rng(spec.inner[1])
        return [pixels[int(rng.integers(len(pixels)))]]
    if spec.inner == "center":
        if not truths:
            raise SceneError("scene has no region to centre the inner point in")
        cx, cy = truths[0].centroid
        return [min(truths[0].pixels, key=lambda p: ((p.x - cx) ** 2 + (p.y - cy) ** 2, p.y, p.x))]
    return list(spec.inner)


def _run_point(args):
    (scene_name, image, degraded, inner, cfg, width, count, seed, reps, timing) = args
    rows = []
    base = dict(scene=scene_name, gap_width=width, gap_count=count, gap_seed=seed,
                technique=cfg.technique.value, n=cfg.n, y=cfg.y, m=cfg.m, b=cfg.b,
                max_iterations=cfg.max_iterations, epsilon=cfg.epsilon,
                inner_x=inner.x, inner_y=inner.y)
    for rep in range(reps):
        try:
            truth = flood_region(image, inner)
            t0 = time.perf_counter()
            est, trace = estimate(degraded, inner, cfg)
            elapsed = time.perf_counter() - t0
        except PreconditionError:
            rows.append(ResultRow(**base, repetition=rep, status="lost"))
            continue
        err = compare(est, truth)
        rows.append(ResultRow(
            **base, repetition=rep, status="ok",
            centroid_x=est.centroid[0], centroid_y=est.centroid[1], area=est.area,
            centroid_error=err.centroid_error, area_ratio=err.area_ratio,
            iterations=len(trace.iterations), work=trace.work,
            wall_time_s=elapsed if timing else None,
        ))
    return rows


def _grid(spec: ExperimentSpec, timing: bool):
    image, truths = generate_scene(spec.scene)
    inners = inner_points(spec, image, truths)
    for width, count, seed in spec.degradations():
        degraded = degrade(image, DegradationSpec(rng_seed=seed, random_gap_count=count,
                                                  random_gap_width=width)) if count else image
        for cfg in spec.configs():
            for inner in inners:
                yield (spec.scene_name, image, degraded, inner, cfg, width, count, seed,
                       spec.repetitions, timing)


def run_experiment(spec: ExperimentSpec, *, timing: bool = False, workers: int = 1) -> list:
    """Run every grid point; rows come back in grid-major order.

    Grid order is degradation (width, count, seed), then estimator config
    (technique, n, y, m, b), then inner point, then repetition.  Wall time
    is only recorded with ``timing=True`` so default output is reproducible
    byte for byte.
    """
    points = list(_grid(spec, timing))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_point, points))
    else:
        chunks = [_run_point(p) for p in points]
    return [row for chunk in chunks for row in chunk]


# --------------------------------------------------------------------------
# CSV

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write(schema: str, cls, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# {schema}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(cls)])
    for row in rows:
        w.writerow([_fmt(v) for v in astuple(row)])
    return buf.getvalue()


_CASTS = {int: int, float: float, str: str, "int": int, "float": float, "str": str,
          "Optional[int]": int, "Optional[float]": float}


def _read(schema: str, cls, text: str) -> list:
    lines = text.splitlines()
    if not lines or lines[0] != f"# {schema}":
        raise SceneError(f"expected schema line '# {schema}'")
    reader = csv.reader(lines[1:])
    header = next(reader, None)
    names = [f.name for f in fields(cls)]
    if header != names:
        raise SceneError(f"unexpected CSV header {header}")
    out = []
    for rec in reader:
        kwargs = {}
        for f, raw in zip(fields(cls), rec):
            if raw == "" and str(f.type).startswith("Optional"):
                kwargs[f.name] = None
            else:
                kwargs[f.name] = _CASTS[f.type](raw)
        out.append(cls(**kwargs))
    return out


def rows_to_csv(rows) -> str:
    return _write(SCHEMA_VERSION, ResultRow, rows)


def parse_csv(text: str) -> list:
    return _read(SCHEMA_VERSION, ResultRow, text)


# --------------------------------------------------------------------------
# benchmark

@dataclass(frozen=True)
class BenchRow:
    scene: str
    technique: str
    n: int
    y: int
    m: int
    b: int
    inner_x: int
    inner_y: int
    repeats: int
    median_s: float
    work: int


def bench(spec: ExperimentSpec, *, repeats: int = 5, warmup: int = 1) -> list:
    """Median wall time and work counter per estimator config.

    Runs on the undegraded scene from each inner point; work counters are
    machine independent, times are not.
    """
    image, truths = generate_scene(spec.scene)
    out = []
    for cfg in spec.configs():
        for inner in inner_points(spec, image, truths):
            for _ in range(warmup):
                estimate(image, inner, cfg)
            times = []
            works = set()
            for _ in range(repeats):
                t0 = time.perf_counter()
                _, trace = estimate(image, inner, cfg)
                times.append(time.perf_counter() - t0)
                works.add(trace.work)
            assert len(works) == 1, "work counter must not vary between runs"
            out.append(BenchRow(spec.scene_name, cfg.technique.value, cfg.n, cfg.y, cfg.m, cfg.b,
                                inner.x, inner.y, repeats, statistics.median(times), works.pop()))
    return out


def bench_to_csv(rows) -> str:
    return _write(BENCH_SCHEMA_VERSION, BenchRow, rows)


def parse_bench_csv(text: str) -> list:
    return _read(BENCH_SCHEMA_VERSION, BenchRow, text)
