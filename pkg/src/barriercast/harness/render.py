"""Overlay rendering of estimator traces as P6 images."""

from __future__ import annotations

import numpy as np

from ..edge_image import EdgeImage
from ..errors import ParameterError
from ..estimators import Trace, ray_pixels, round_pixel
from ..pnm import save_ppm

WHITE = (255, 255, 255)
EDGE = (0, 0, 0)
BLOCK = (200, 240, 200)
MARKED = (170, 210, 255)
RAY = (220, 0, 0)
GRID = (0, 0, 255)
INNER = (255, 0, 255)
CENTROID = (255, 140, 0)


def overlay(image: EdgeImage, trace: Trace, iteration: int = 0) -> np.ndarray:
    """RGB array for one iteration of ``trace`` drawn over ``image``.

    Layers, bottom to top: selected blocks, marked pixels, rays, grid
    points, edges, inner point, centroid.
    """
    h, w = image.height, image.width
    rgb = np.empty((h, w, 3), dtype=np.uint8)
    rgb[:] = WHITE
    if not trace.iterations:
        if iteration != 0:
            raise ParameterError(f"iteration {iteration} out of range for an empty trace")
        rgb[image.edges] = EDGE
        return rgb
    if not 0 <= iteration < len(trace.iterations):
        raise ParameterError(f"iteration {iteration} out of range 0..{len(trace.iterations) - 1}")
    rec = trace.iterations[iteration]

    for bx, by in sorted(rec.blocks):
        m = trace.m
        rgb[by * m:min(by * m + m, h), bx * m:min(bx * m + m, w)] = BLOCK
    for x, y in rec.marked:
        rgb[y, x] = MARKED
    for seg in rec.rays:
        for x, y in ray_pixels(seg):
            rgb[y, x] = RAY
    for x, y in rec.grid:
        rgb[y, x] = GRID
    rgb[image.edges] = EDGE
    ix, iy = rec.inner
    rgb[iy, ix] = INNER
    cx, cy = round_pixel(rec.centroid[0]), round_pixel(rec.centroid[1])
    if image.in_bounds(cx, cy):
        rgb[cy, cx] = CENTROID
    return rgb


def render_overlay(image: EdgeImage, trace: Trace, iteration: int = 0) -> bytes:
    return save_ppm(overlay(image, trace, iteration))
