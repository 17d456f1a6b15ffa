"""Pixel stepping, barrier probes and barrier-aware ray casting.

A step goes from a *source* pixel to one of its 8 neighbours, the *target*.
The barrier of size ``b`` is the line of ``b`` pixels through the target,
perpendicular to the step; the step is refused if any of them is an edge.
With ``b == 1`` this is the plain "is the target an edge" test.

Line stepping is the integer midpoint rule: one step per major-axis pixel,
the minor coordinate is the ideal line's value rounded to the nearest
integer with exact halves rounded away from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Tuple, Union

import numpy as np

from .edge_image import EdgeImage, PixelPos
from .errors import ParameterError, PreconditionError

TWO_PI = 2.0 * math.pi
# absorbs libm noise so exact-half ties always round away from the origin
_TIE_EPS = 1e-9

STEPS8 = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


def normalize_angle(angle: float) -> float:
    a = math.fmod(angle, TWO_PI)
    if a < 0:
        a += TWO_PI
    return 0.0 if a >= TWO_PI else a


def ray_angles(n: int) -> list[float]:
    """``n`` evenly spaced directions starting at angle 0."""
    return [TWO_PI * k / n for k in range(n)]


def check_barrier_size(b: int) -> None:
    if not isinstance(b, (int, np.integer)) or b < 1 or b % 2 == 0:
        raise ParameterError(f"barrier size must be an odd integer >= 1, got {b!r}")


def _step_of(source, target) -> Tuple[int, int]:
    dx = target[0] - source[0]
    dy = target[1] - source[1]
    if (dx, dy) == (0, 0) or abs(dx) > 1 or abs(dy) > 1:
        raise ParameterError(f"{tuple(source)} -> {tuple(target)} is not an 8-neighbour step")
    return dx, dy


def barrier_pixels(source, target, b: int) -> list[PixelPos]:
    """The ``b`` pixels centred on ``target`` across the step direction.

    For a step ``(dx, dy)`` the barrier runs along ``(-dy, dx)``: a column
    for horizontal steps, a row for vertical ones and the opposite diagonal
    for diagonal steps.  Positions may lie outside the image.
    """
    check_barrier_size(b)
    dx, dy = _step_of(source, target)
    px, py = -dy, dx
    h = b // 2
    tx, ty = target
    return [PixelPos(tx + j * px, ty + j * py) for j in range(-h, h + 1)]


def blocked(image: EdgeImage, source, target, b: int) -> bool:
    return any(image.is_edge(x, y) for x, y in barrier_pixels(source, target, b))


def _direction_params(angle: float):
    c, s = math.cos(angle), math.sin(angle)
    ac, as_ = abs(c), abs(s)
    if ac >= as_:
        return True, as_ / ac, (1 if c > 0 else -1), (1 if s >= 0 else -1)
    return False, ac / as_, (1 if s > 0 else -1), (1 if c >= 0 else -1)


def _angle_offset(params, k: int) -> Tuple[int, int]:
    x_major, slope, smaj, smin = params
    minor = smin * math.floor(k * slope + 0.5 + _TIE_EPS)
    return (smaj * k, minor) if x_major else (minor, smaj * k)


def _target_offset(dmaj: int, dmin: int, k: int) -> int:
    # round(k * dmin / dmaj) with halves away from zero, exact in integers
    num = 2 * k * abs(dmin) + abs(dmaj)
    q = num // (2 * abs(dmaj))
    return q if dmin >= 0 else -q


def step_line(start, toward: Union[float, Tuple[int, int]]) -> Iterator[Tuple[PixelPos, PixelPos]]:
    """Yield ``(source, target)`` 8-neighbour steps from ``start``.

    ``toward`` is either an angle in radians (the sequence is unbounded) or
    a pixel, in which case stepping ends on that pixel.
    """
    sx, sy = start
    prev = PixelPos(sx, sy)
    if isinstance(toward, (tuple, list)):
        tx, ty = toward
        dx, dy = tx - sx, ty - sy
        if abs(dx) >= abs(dy):
            for k in range(1, abs(dx) + 1):
                cur = PixelPos(sx + (k if dx > 0 else -k), sy + _target_offset(dx, dy, k))
                yield prev, cur
                prev = cur
        else:
            for k in range(1, abs(dy) + 1):
                cur = PixelPos(sx + _target_offset(dy, dx, k), sy + (k if dy > 0 else -k))
                yield prev, cur
                prev = cur
        return
    params = _direction_params(normalize_angle(float(toward)))
    k = 0
    while True:
        k += 1
        ox, oy = _angle_offset(params, k)
        cur = PixelPos(sx + ox, sy + oy)
        yield prev, cur
        prev = cur


@dataclass(frozen=True)
class RayHit:
    hit: PixelPos
    length: float
    steps: int = 0


class Walker:
    """Fast barrier probe bound to one image and one barrier size.

    Keeps a padded byte copy of the edge map so barrier lookups need no
    bounds checks, caches per-direction step offsets, and counts every
    barrier evaluation in ``checks``.  ``check`` optionally replaces the
    barrier test with a ``(source, target) -> bool`` callable.
    """

    def __init__(self, image: EdgeImage, b: int, check=None):
        check_barrier_size(b)
        self.image = image
        self.b = b
        self.checks = 0
        self._check = check
        w, h = image.width, image.height
        pad = b // 2 + 1
        self._pad = pad
        self._stride = w + 2 * pad
        padded = np.ones((h + 2 * pad, w + 2 * pad), dtype=np.uint8)
        padded[pad:pad + h, pad:pad + w] = image.edges
        self._buf = padded.ravel().tobytes()
        half = b // 2
        self._barrier = {
            (dx, dy): tuple(j * (-dy) + j * dx * self._stride for j in range(-half, half + 1))
            for dx, dy in STEPS8
        }
        self._max_steps = max(w, h) + 2
        self._ray_cache = {}

    def blocked(self, sx: int, sy: int, tx: int, ty: int) -> bool:
        self.checks += 1
        if self._check is not None:
            return bool(self._check(PixelPos(sx, sy), PixelPos(tx, ty)))
        base = (ty + self._pad) * self._stride + tx + self._pad
        buf = self._buf
        for off in self._barrier[(tx - sx, ty - sy)]:
            if buf[base + off]:
                return True
        return False

    def ray_offsets(self, angle: float):
        offs = self._ray_cache.get(angle)
        if offs is None:
            params = _direction_params(normalize_angle(angle))
            offs = [_angle_offset(params, k) for k in range(1, self._max_steps + 1)]
            self._ray_cache[angle] = offs
        return offs

    def cast(self, ox: int, oy: int, angle: float) -> Tuple[int, int, int]:
        """Walk from ``(ox, oy)`` until blocked; returns ``(hx, hy, steps)``."""
        px, py = ox, oy
        steps = 0
        for dx, dy in self.ray_offsets(angle):
            tx, ty = ox + dx, oy + dy
            if self.blocked(px, py, tx, ty):
                break
            px, py = tx, ty
            steps += 1
        return px, py, steps

    def walk_to(self, start, target) -> PixelPos:
        """Last unblocked pixel on the line from ``start`` to ``target``."""
        last = PixelPos(*start)
        for src, tgt in step_line(start, tuple(target)):
            if self.blocked(src.x, src.y, tgt.x, tgt.y):
                break
            last = tgt
        return last


def cast_ray(image: EdgeImage, origin, direction: float, b: int) -> RayHit:
    """Cast one ray; the hit is the last pixel reached before a blocked step."""
    ox, oy = origin
    if image.is_edge(ox, oy):
        raise PreconditionError(f"ray origin {tuple(origin)} is an edge pixel or out of bounds")
    hx, hy, steps = Walker(image, b).cast(ox, oy, float(direction))
    return RayHit(PixelPos(hx, hy), math.hypot(hx - ox, hy - oy), steps)
