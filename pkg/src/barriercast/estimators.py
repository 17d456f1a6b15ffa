"""Object projection feature estimators.

Each technique takes an edge image and an inner point and returns a
:class:`FeatureEstimate` (centroid, area proxy, updated inner point) plus a
:class:`Trace` of what it touched.  Every traversal step goes through a
barrier probe of size ``cfg.b``; ``b == 1`` is the barrier-free original.

Area units differ by technique: summed ray length for the ray casters,
``m*m`` times the block/lattice count for rasterization and grid casting,
pixel count for pixel filling.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import islice

from .edge_image import EdgeImage, PixelPos
from .errors import ParameterError, PreconditionError
from .traversal import Walker, check_barrier_size, ray_angles, step_line

N4 = ((1, 0), (0, 1), (-1, 0), (0, -1))


class Technique(str, Enum):
    N_RAY = "n_ray"
    ITER_N_RAY = "iter_n_ray"
    ITER_NY_RAY = "iter_ny_ray"
    ITER_NY_RASTER = "iter_ny_raster"
    PIXEL_FILL = "pixel_fill"
    GRID_CAST = "grid_cast"


@dataclass(frozen=True)
class EstimatorConfig:
    technique: Technique = Technique.N_RAY
    n: int = 32
    y: int = 2
    m: int = 8
    b: int = 3
    max_iterations: int = 10
    epsilon: float = 0.5

    def __post_init__(self):
        try:
            object.__setattr__(self, "technique", Technique(self.technique))
        except ValueError:
            raise ParameterError(f"unknown technique {self.technique!r}") from None
        if self.n < 3:
            raise ParameterError(f"n must be >= 3, got {self.n}")
        if self.y < 1:
            raise ParameterError(f"y must be >= 1, got {self.y}")
        if self.m < 1:
            raise ParameterError(f"m must be >= 1, got {self.m}")
        check_barrier_size(self.b)
        if self.max_iterations < 1:
            raise ParameterError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.epsilon >= 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")

    def replace(self, **changes) -> "EstimatorConfig":
        from dataclasses import replace
        return replace(self, **changes)


@dataclass(frozen=True)
class FeatureEstimate:
    centroid: tuple
    area: float
    inner_point: PixelPos


@dataclass(frozen=True)
class RaySegment:
    origin: PixelPos
    angle: float
    steps: int
    hit: PixelPos
    length: float
    level: int = 1
    weight: int = 1


@dataclass
class IterationRecord:
    inner: PixelPos
    centroid: tuple = (math.nan, math.nan)
    rays: list = field(default_factory=list)
    marked: list = field(default_factory=list)
    blocks: frozenset = frozenset()
    grid: list = field(default_factory=list)
    checks: int = 0


@dataclass
class Trace:
    technique: Technique
    b: int
    m: int
    iterations: list = field(default_factory=list)
    recenter_rays: list = field(default_factory=list)
    inner_path: list = field(default_factory=list)
    checks: int = 0
    converged: bool = False

    @property
    def work(self) -> int:
        """Barrier pixels probed during the run: ``b`` per step check."""
        return self.checks * self.b


def ray_pixels(seg: RaySegment) -> list:
    """Pixels on a traced ray, origin through hit."""
    return [seg.origin] + [t for _, t in islice(step_line(seg.origin, seg.angle), seg.steps)]


# --------------------------------------------------------------------------
# shared pieces


def round_pixel(v: float) -> int:
    """Nearest integer, exact halves toward negative infinity."""
    return math.ceil(v - 0.5)


def _round_point(c) -> PixelPos:
    return PixelPos(round_pixel(c[0]), round_pixel(c[1]))


def _mean(points, weights=None) -> tuple:
    if weights is None:
        k = len(points)
        return (sum(p[0] for p in points) / k, sum(p[1] for p in points) / k)
    total = sum(weights)
    return (sum(p[0] * w for p, w in zip(points, weights)) / total,
            sum(p[1] * w for p, w in zip(points, weights)) / total)


def _fan(walker: Walker, origin, n: int, level=1, weight=1) -> list:
    ox, oy = origin
    out = []
    for angle in ray_angles(n):
        hx, hy, steps = walker.cast(ox, oy, angle)
        out.append(RaySegment(PixelPos(ox, oy), angle, steps, PixelPos(hx, hy),
                              math.hypot(hx - ox, hy - oy), level, weight))
    return out


def _relocate(walker: Walker, point, n: int):
    """Cast ``n`` rays and move to the rounded mean hit, edge-stopped."""
    rays = _fan(walker, point, n)
    mean = _mean([r.hit for r in rays])
    return walker.walk_to(point, _round_point(mean)), rays


def _check_inner(image: EdgeImage, inner) -> PixelPos:
    x, y = inner
    if not image.in_bounds(x, y):
        raise PreconditionError(f"inner point {tuple(inner)} is outside the image")
    if image.edges[y, x]:
        raise PreconditionError(f"inner point {tuple(inner)} is an edge pixel")
    return PixelPos(int(x), int(y))


def _dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def recenter_inner_point(image: EdgeImage, point, centroid, cfg: EstimatorConfig,
                         *, walker: Walker = None) -> PixelPos:
    """Move ``point`` toward ``centroid`` until it arrives or is blocked,
    then re-centre it on the mean hit of ``cfg.n`` rays cast from there.
    """
    point = PixelPos(*point)
    if image.is_edge(*point):
        return point
    walker = walker or Walker(image, cfg.b)
    moved = walker.walk_to(point, _round_point(centroid))
    return _relocate(walker, moved, cfg.n)[0]


# --------------------------------------------------------------------------
# techniques


def _finish(walker, trace, point, cfg, centroid, area):
    final, rays = _relocate(walker, point, cfg.n)
    trace.recenter_rays = rays
    trace.inner_path.append(final)
    trace.checks = walker.checks
    return FeatureEstimate(centroid, float(area), final), trace


def estimate_n_ray(image, inner, cfg, *, check=None):
    inner = _check_inner(image, inner)
    walker = Walker(image, cfg.b, check)
    trace = Trace(Technique.N_RAY, cfg.b, cfg.m, inner_path=[inner])
    rays = _fan(walker, inner, cfg.n)
    centroid = _mean([r.hit for r in rays])
    area = sum(r.length for r in rays)
    trace.iterations.append(IterationRecord(inner, centroid, rays=rays, checks=walker.checks))
    moved = walker.walk_to(inner, _round_point(centroid))
    trace.inner_path.append(moved)
    trace.converged = True
    return _finish(walker, trace, moved, cfg, centroid, area)


def _iterate(image, inner, cfg, technique, step, check):
    """Shared loop: estimate, displace the inner point, test convergence.

    ``step(walker, point, record)`` fills ``record`` and returns
    ``(centroid, area, changed)``; ``changed`` is False only when a
    technique's accumulated state did not grow this iteration.
    """
    inner = _check_inner(image, inner)
    walker = Walker(image, cfg.b, check)
    trace = Trace(technique, cfg.b, cfg.m, inner_path=[inner])
    point = inner
    prev_centroid = None
    centroid, area = None, 0.0
    for _ in range(cfg.max_iterations):
        before = walker.checks
        record = IterationRecord(point)
        centroid, area, changed = step(walker, point, record)
        record.centroid = centroid
        moved = walker.walk_to(point, _round_point(centroid))
        record.checks = walker.checks - before
        trace.iterations.append(record)
        trace.inner_path.append(moved)
        d_centroid = _dist(centroid, prev_centroid if prev_centroid is not None else point)
        d_inner = _dist(moved, point)
        prev_centroid, point = centroid, moved
        if not changed and d_centroid < cfg.epsilon and d_inner < cfg.epsilon:
            trace.converged = True
            break
    return _finish(walker, trace, point, cfg, centroid, area)


def estimate_iter_n_ray(image, inner, cfg, *, check=None):
    def step(walker, point, record):
        record.rays = _fan(walker, point, cfg.n)
        return (_mean([r.hit for r in record.rays]),
                sum(r.length for r in record.rays), False)

    return _iterate(image, inner, cfg, Technique.ITER_N_RAY, step, check)


def _cast_tree(walker, origin, n, depth):
    """Cast ``n`` rays from ``origin``, then ``n`` more from every hit, ``depth`` levels.

    Coinciding hits are recast once, carrying their multiplicity as weight.
    Returns ``(all_rays, last_level_rays)``.
    """
    frontier = Counter({PixelPos(*origin): 1})
    everything = []
    last = []
    for level in range(1, depth + 1):
        last = []
        nxt = Counter()
        for point, weight in frontier.items():
            for seg in _fan(walker, point, n, level, weight):
                last.append(seg)
                nxt[seg.hit] += weight
        everything.extend(last)
        frontier = nxt
    return everything, last


def estimate_iter_ny_ray(image, inner, cfg, *, check=None):
    def step(walker, point, record):
        record.rays, last = _cast_tree(walker, point, cfg.n, cfg.y)
        centroid = _mean([r.hit for r in last], [r.weight for r in last])
        return centroid, sum(r.weight * r.length for r in last), False

    return _iterate(image, inner, cfg, Technique.ITER_NY_RAY, step, check)


def block_center(bx: int, by: int, m: int, width: int, height: int) -> tuple:
    """Centre of block ``(bx, by)`` clipped to the image."""
    x0, y0 = bx * m, by * m
    x1, y1 = min(x0 + m, width) - 1, min(y0 + m, height) - 1
    return ((x0 + x1) / 2.0, (y0 + y1) / 2.0)


def estimate_iter_ny_raster(image, inner, cfg, *, check=None):
    m = cfg.m
    selected = set()

    def step(walker, point, record):
        rays, _ = _cast_tree(walker, point, cfg.n, cfg.y)
        record.rays = rays
        size = len(selected)
        for seg in rays:
            ox, oy = seg.origin
            selected.add((ox // m, oy // m))
            for dx, dy in walker.ray_offsets(seg.angle)[:seg.steps]:
                selected.add(((ox + dx) // m, (oy + dy) // m))
        record.blocks = frozenset(selected)
        centers = [block_center(bx, by, m, image.width, image.height) for bx, by in sorted(selected)]
        return _mean(centers), m * m * len(selected), len(selected) != size

    return _iterate(image, inner, cfg, Technique.ITER_NY_RASTER, step, check)


def estimate_pixel_fill(image, inner, cfg, *, check=None):
    inner = _check_inner(image, inner)
    walker = Walker(image, cfg.b, check)
    marked = {inner}
    order = [inner]
    queue = deque([inner])
    while queue:
        sx, sy = queue.popleft()
        for dx, dy in N4:
            t = PixelPos(sx + dx, sy + dy)
            if t in marked or walker.blocked(sx, sy, t.x, t.y):
                continue
            marked.add(t)
            order.append(t)
            queue.append(t)
    return _fill_result(image, walker, inner, cfg, Technique.PIXEL_FILL, order, 1, "marked")


def estimate_grid_cast(image, inner, cfg, *, check=None):
    inner = _check_inner(image, inner)
    walker = Walker(image, cfg.b, check)
    m = cfg.m
    reached = {inner}
    order = [inner]
    queue = deque([inner])
    while queue:
        sx, sy = queue.popleft()
        for dx, dy in N4:
            t = PixelPos(sx + m * dx, sy + m * dy)
            if t in reached:
                continue
            cx, cy = sx, sy
            for _ in range(m):
                if walker.blocked(cx, cy, cx + dx, cy + dy):
                    break
                cx, cy = cx + dx, cy + dy
            else:
                reached.add(t)
                order.append(t)
                queue.append(t)
    return _fill_result(image, walker, inner, cfg, Technique.GRID_CAST, order, m * m, "grid")


def _fill_result(image, walker, inner, cfg, technique, order, cell_area, kind):
    centroid = _mean(order)
    record = IterationRecord(inner, centroid, checks=walker.checks)
    setattr(record, kind, order)
    trace = Trace(technique, cfg.b, cfg.m, iterations=[record], inner_path=[inner], converged=True)
    moved = walker.walk_to(inner, _round_point(centroid))
    trace.inner_path.append(moved)
    return _finish(walker, trace, moved, cfg, centroid, cell_area * len(order))


_DISPATCH = {
    Technique.N_RAY: estimate_n_ray,
    Technique.ITER_N_RAY: estimate_iter_n_ray,
    Technique.ITER_NY_RAY: estimate_iter_ny_ray,
    Technique.ITER_NY_RASTER: estimate_iter_ny_raster,
    Technique.PIXEL_FILL: estimate_pixel_fill,
    Technique.GRID_CAST: estimate_grid_cast,
}


def estimate(image: EdgeImage, inner, cfg: EstimatorConfig = EstimatorConfig(), *, check=None):
    """Run ``cfg.technique`` from ``inner``; returns ``(FeatureEstimate, Trace)``.

    ``check``, if given, replaces the barrier probe with a
    ``(source, target) -> bool`` callable (used to test the barrier-free case
    against a plain single-pixel test).
    """
    return _DISPATCH[cfg.technique](image, inner, cfg, check=check)
