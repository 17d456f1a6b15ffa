"""Edge bitmaps, synthetic scenes with exact ground truth, and gap injection.

Coordinates are ``(x, y)`` = (column, row).  The bitmap itself is stored
row-major as ``edges[y, x]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import SceneError


class PixelPos(NamedTuple):
    x: int
    y: int


class EdgeImage:
    """Immutable boolean edge map; ``True`` marks an edge pixel.

    Anything outside ``[0, width) x [0, height)`` is reported as an edge so
    that every traversal terminates at the border.
    """

    __slots__ = ("_edges",)

    def __init__(self, edges):
        arr = np.array(edges, dtype=bool, copy=True)
        if arr.ndim != 2:
            raise SceneError(f"edge map must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 3 or arr.shape[1] < 3:
            raise SceneError(f"edge map must be at least 3x3, got {arr.shape[1]}x{arr.shape[0]}")
        arr.setflags(write=False)
        self._edges = arr

    @classmethod
    def blank(cls, width: int, height: int) -> "EdgeImage":
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def edges(self) -> np.ndarray:
        """Read-only ``(height, width)`` boolean array."""
        return self._edges

    @property
    def width(self) -> int:
        return self._edges.shape[1]

    @property
    def height(self) -> int:
        return self._edges.shape[0]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_edge(self, x: int, y: int) -> bool:
        if not (0 <= x < self.width and 0 <= y < self.height):
            return True
        return bool(self._edges[y, x])

    def edge_pixels(self) -> list[PixelPos]:
        """Edge pixels in row-major order."""
        ys, xs = np.nonzero(self._edges)
        return [PixelPos(int(x), int(y)) for x, y in zip(xs, ys)]

    def __eq__(self, other):
        if not isinstance(other, EdgeImage):
            return NotImplemented
        return self._edges.shape == other._edges.shape and bool(np.array_equal(self._edges, other._edges))

    def __hash__(self):
        return hash((self._edges.shape, self._edges.tobytes()))

    def __repr__(self):
        return f"EdgeImage({self.width}x{self.height}, {int(self._edges.sum())} edge px)"


# --------------------------------------------------------------------------
# Scenes


@dataclass(frozen=True)
class Disk:
    center: PixelPos
    radius: float

    def mask(self, xs, ys):
        cx, cy = self.center
        return (xs - cx) ** 2 + (ys - cy) ** 2 <= self.radius ** 2

    def bbox(self):
        cx, cy = self.center
        r = math.floor(self.radius)
        return cx - r, cy - r, cx + r, cy + r


@dataclass(frozen=True)
class Rectangle:
    corner: PixelPos
    w: int
    h: int

    def mask(self, xs, ys):
        x0, y0 = self.corner
        return (xs >= x0) & (xs < x0 + self.w) & (ys >= y0) & (ys < y0 + self.h)

    def bbox(self):
        x0, y0 = self.corner
        return x0, y0, x0 + self.w - 1, y0 + self.h - 1


@dataclass(frozen=True)
class Capsule:
    """All pixels within ``radius`` of the segment ``a``-``b``."""

    a: PixelPos
    b: PixelPos
    radius: float

    def mask(self, xs, ys):
        ax, ay = self.a
        bx, by = self.b
        vx, vy = bx - ax, by - ay
        vv = vx * vx + vy * vy
        if vv == 0:
            t = np.zeros(np.broadcast(xs, ys).shape)
        else:
            t = np.clip(((xs - ax) * vx + (ys - ay) * vy) / vv, 0.0, 1.0)
        dx = xs - (ax + t * vx)
        dy = ys - (ay + t * vy)
        return dx * dx + dy * dy <= self.radius ** 2

    def bbox(self):
        r = math.floor(self.radius)
        return (min(self.a.x, self.b.x) - r, min(self.a.y, self.b.y) - r,
                max(self.a.x, self.b.x) + r, max(self.a.y, self.b.y) + r)


Shape = Union[Disk, Rectangle, Capsule]


@dataclass(frozen=True)
class SceneSpec:
    width: int
    height: int
    shapes: tuple = ()

    def validate(self):
        if self.width < 3 or self.height < 3:
            raise SceneError(f"scene must be at least 3x3, got {self.width}x{self.height}")
        for i, shape in enumerate(self.shapes):
            x0, y0, x1, y1 = shape.bbox()
            if x0 < 2 or y0 < 2 or x1 > self.width - 3 or y1 > self.height - 3:
                raise SceneError(f"shape {shape!r} violates the 2 px border margin", index=i)

    def filled(self) -> np.ndarray:
        """Boolean ``(height, width)`` mask of the union of all shapes."""
        ys, xs = np.mgrid[0:self.height, 0:self.width]
        out = np.zeros((self.height, self.width), dtype=bool)
        for shape in self.shapes:
            out |= shape.mask(xs, ys)
        return out


PRESETS = {
    "disk": SceneSpec(101, 101, (Disk(PixelPos(50, 50), 30),)),
    "rect": SceneSpec(51, 51, (Rectangle(PixelPos(10, 10), 31, 21),)),
    # palm + index, middle, ring fingers + thumb
    "hand-v1": SceneSpec(160, 160, (
        Disk(PixelPos(80, 100), 30),
        Capsule(PixelPos(62, 85), PixelPos(52, 25), 5),
        Capsule(PixelPos(78, 80), PixelPos(76, 18), 5),
        Capsule(PixelPos(95, 82), PixelPos(102, 24), 5),
        Capsule(PixelPos(60, 110), PixelPos(22, 92), 5),
    )),
}

# Points the experiments use as "inside a finger" of hand-v1 (index finger tip).
HAND_FINGER_POINT = PixelPos(54, 35)


def preset(name: str) -> SceneSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise SceneError(f"unknown scene preset {name!r}; choose from {sorted(PRESETS)}") from None


def boundary_of(filled: np.ndarray) -> np.ndarray:
    """Filled pixels having at least one 8-neighbour outside the fill.

    The 8-neighbour test yields 4-connected contours, which is what keeps
    8-connected ray stepping from slipping diagonally through a contour.
    """
    p = np.pad(filled, 1, constant_values=False)
    h, w = filled.shape
    interior = filled.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx or dy:
                interior &= p[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]
    return filled & ~interior


def generate_scene(spec: SceneSpec):
    """Rasterize ``spec`` into an edge image plus one ground truth per region.

    Returns ``(image, truths)`` with truths ordered by decreasing area (ties
    broken by the first pixel in row-major order).
    """
    from .oracle import region_components

    spec.validate()
    filled = spec.filled()
    image = EdgeImage(boundary_of(filled))
    truths = region_components(image, filled & ~image.edges)
    return image, truths


def random_scene(rng, width: int = 64, height: int = 64, max_shapes: int = 3) -> SceneSpec:
    """A union of 1..``max_shapes`` random disks, rectangles and capsules."""
    shapes = []
    for _ in range(int(rng.integers(1, max_shapes + 1))):
        kind = int(rng.integers(3))
        if kind == 0:
            r = int(rng.integers(4, min(width, height) // 3))
            c = PixelPos(int(rng.integers(2 + r, width - 2 - r)), int(rng.integers(2 + r, height - 2 - r)))
            shapes.append(Disk(c, r))
        elif kind == 1:
            w = int(rng.integers(5, width // 2))
            h = int(rng.integers(5, height // 2))
            shapes.append(Rectangle(PixelPos(int(rng.integers(2, width - 2 - w)),
                                             int(rng.integers(2, height - 2 - h))), w, h))
        else:
            r = int(rng.integers(2, 6))
            a = PixelPos(int(rng.integers(2 + r, width - 2 - r)), int(rng.integers(2 + r, height - 2 - r)))
            b = PixelPos(int(rng.integers(2 + r, width - 2 - r)), int(rng.integers(2 + r, height - 2 - r)))
            shapes.append(Capsule(a, b, r))
    return SceneSpec(width, height, tuple(shapes))


# --------------------------------------------------------------------------
# Degradation


@dataclass(frozen=True)
class Gap:
    location: PixelPos
    width: int = 1


@dataclass(frozen=True)
class DegradationSpec:
    gaps: tuple = ()
    rng_seed: int = 0
    random_gap_count: int = 0
    random_gap_width: int = 1

    def validate(self):
        for i, g in enumerate(self.gaps):
            if g.width < 1:
                raise SceneError(f"gap width must be >= 1, got {g.width}", index=i)
        if self.random_gap_count < 0:
            raise SceneError("random_gap_count must be >= 0")
        if self.random_gap_count and self.random_gap_width < 1:
            raise SceneError("random_gap_width must be >= 1")


# 4-neighbours first so a walk follows straight runs in +x / +y order.
_WALK_ORDER = ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1))


def contour_walk(edges: np.ndarray, start, length: int, exclude=frozenset()):
    """Up to ``length`` consecutive edge pixels along an 8-connected walk.

    The walk starts at ``start`` and greedily moves to the first unvisited
    edge neighbour in a fixed order; it may return fewer pixels if the
    contour ends.
    """
    h, w = edges.shape
    path = [PixelPos(*start)]
    seen = {path[0]} | set(exclude)
    while len(path) < length:
        x, y = path[-1]
        for dx, dy in _WALK_ORDER:
            q = PixelPos(x + dx, y + dy)
            if 0 <= q.x < w and 0 <= q.y < h and edges[q.y, q.x] and q not in seen:
                path.append(q)
                seen.add(q)
                break
        else:
            break
    return path


def _nearest_edge(edges: np.ndarray, loc):
    ys, xs = np.nonzero(edges)
    if len(xs) == 0:
        return None, math.inf
    d2 = (xs - loc[0]) ** 2 + (ys - loc[1]) ** 2
    i = int(np.argmin(d2))  # first minimum in row-major order
    return PixelPos(int(xs[i]), int(ys[i])), math.sqrt(float(d2[i]))


def degrade(image: EdgeImage, spec: DegradationSpec) -> EdgeImage:
    """Clear runs of contour pixels to simulate missed edges.

    Explicit gaps are carved first, in order, then ``random_gap_count``
    non-overlapping random gaps drawn from a generator seeded with
    ``rng_seed``.  Pixels are only ever cleared.
    """
    spec.validate()
    edges = image.edges.copy()
    for i, gap in enumerate(spec.gaps):
        start, dist = _nearest_edge(edges, gap.location)
        if start is None or dist > gap.width:
            raise SceneError(f"gap location {tuple(gap.location)} is not within "
                             f"{gap.width} px of an edge", index=i)
        for p in contour_walk(edges, start, gap.width):
            edges[p.y, p.x] = False

    if spec.random_gap_count:
        rng = np.random.default_rng(spec.rng_seed)
        width = spec.random_gap_width
        placed = 0
        attempts = 0
        while placed < spec.random_gap_count:
            attempts += 1
            if attempts > 1000 * spec.random_gap_count:
                raise SceneError(f"could not place {spec.random_gap_count} gaps of width {width}")
            ys, xs = np.nonzero(edges)
            if len(xs) == 0:
                raise SceneError("no edge pixels left to carve")
            k = int(rng.integers(len(xs)))
            # neighbouring earlier gaps must not be merged into this one
            path = contour_walk(edges, (int(xs[k]), int(ys[k])), width)
            if len(path) < width:
                continue
            for p in path:
                edges[p.y, p.x] = False
            placed += 1
    return EdgeImage(edges)


def straight_runs(image: EdgeImage, min_length: int = 3):
    """Maximal horizontal and vertical runs of edge pixels.

    Returns a list of ``(start, axis, length)`` with ``axis`` either
    ``(1, 0)`` or ``(0, 1)``; pixels are ``start + k * axis``.
    """
    e = image.edges
    runs = []
    for axis, arr in (((1, 0), e), ((0, 1), e.T)):
        for row in range(arr.shape[0]):
            line = arr[row]
            col = 0
            n = len(line)
            while col < n:
                if not line[col]:
                    col += 1
                    continue
                s = col
                while col < n and line[col]:
                    col += 1
                if col - s >= min_length:
                    start = PixelPos(s, row) if axis == (1, 0) else PixelPos(row, s)
                    runs.append((start, axis, col - s))
    return runs


def straight_gap(image: EdgeImage, rng, width: int, margin: int) -> Gap:
    """A random gap of ``width`` placed inside a straight contour run.

    At least ``margin`` untouched run pixels are kept on both sides of the
    gap, away from contour corners.
    """
    runs = [r for r in straight_runs(image, width + 2 * margin)]
    if not runs:
        raise SceneError(f"no straight run long enough for a width-{width} gap with margin {margin}")
    start, (ax, ay), length = runs[int(rng.integers(len(runs)))]
    off = margin + int(rng.integers(length - width - 2 * margin + 1))
    return Gap(PixelPos(start.x + ax * off, start.y + ay * off), width)


# --------------------------------------------------------------------------
# JSON documents

def _pos(v):
    if isinstance(v, dict):
        return PixelPos(int(v["x"]), int(v["y"]))
    x, y = v
    return PixelPos(int(x), int(y))


def shape_from_dict(d: dict) -> Shape:
    kind = d.get("type")
    try:
        if kind == "disk":
            return Disk(_pos(d["center"]), float(d["radius"]))
        if kind == "rectangle":
            return Rectangle(_pos(d["corner"]), int(d["w"]), int(d["h"]))
        if kind == "capsule":
            return Capsule(_pos(d["a"]), _pos(d["b"]), float(d["radius"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneError(f"bad {kind} shape: {exc}") from None
    raise SceneError(f"unknown shape type {kind!r}")


def shape_to_dict(s: Shape) -> dict:
    if isinstance(s, Disk):
        return {"type": "disk", "center": list(s.center), "radius": s.radius}
    if isinstance(s, Rectangle):
        return {"type": "rectangle", "corner": list(s.corner), "w": s.w, "h": s.h}
    return {"type": "capsule", "a": list(s.a), "b": list(s.b), "radius": s.radius}


def scene_from_dict(d) -> SceneSpec:
    """Accepts ``{"preset": name}``, a bare preset name, or a full scene."""
    if isinstance(d, str):
        return preset(d)
    if "preset" in d:
        return preset(d["preset"])
    try:
        shapes = []
        for i, s in enumerate(d.get("shapes", [])):
            try:
                shapes.append(shape_from_dict(s))
            except SceneError as exc:
                raise SceneError(str(exc), index=i) from None
        return SceneSpec(int(d["width"]), int(d["height"]), tuple(shapes))
    except KeyError as exc:
        raise SceneError(f"scene is missing field {exc}") from None


def scene_to_dict(spec: SceneSpec) -> dict:
    return {"width": spec.width, "height": spec.height,
            "shapes": [shape_to_dict(s) for s in spec.shapes]}


def degradation_from_dict(d: dict) -> DegradationSpec:
    try:
        gaps = tuple(Gap(_pos(g["location"]), int(g.get("width", 1))) for g in d.get("gaps", []))
        return DegradationSpec(
            gaps=gaps,
            rng_seed=int(d.get("rng_seed", 0)),
            random_gap_count=int(d.get("random_gap_count", 0)),
            random_gap_width=int(d.get("random_gap_width", 1)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneError(f"bad degradation spec: {exc}") from None


def degradation_to_dict(spec: DegradationSpec) -> dict:
    return {
        "gaps": [{"location": list(g.location), "width": g.width} for g in spec.gaps],
        "rng_seed": spec.rng_seed,
        "random_gap_count": spec.random_gap_count,
        "random_gap_width": spec.random_gap_width,
    }


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
