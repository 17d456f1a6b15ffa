"""Exact region statistics used as ground truth.

The labelling here goes through ``scipy.ndimage.label`` on purpose: it shares
no code with the queue-based fills in :mod:`barriercast.estimators`, so the two
can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .edge_image import EdgeImage, PixelPos
from .errors import ParameterError, PreconditionError

_FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class RegionStats:
    pixels: frozenset
    centroid: tuple
    area: int

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "RegionStats":
        ys, xs = np.nonzero(mask)
        pixels = frozenset(PixelPos(int(x), int(y)) for x, y in zip(xs, ys))
        centroid = (float(xs.mean()), float(ys.mean())) if len(xs) else (math.nan, math.nan)
        return cls(pixels, centroid, len(xs))

    def mask(self, width: int, height: int) -> np.ndarray:
        out = np.zeros((height, width), dtype=bool)
        for x, y in self.pixels:
            out[y, x] = True
        return out


GroundTruth = RegionStats


def flood_region(image: EdgeImage, seed) -> RegionStats:
    """All pixels 4-connected to ``seed`` without crossing an edge pixel."""
    x, y = seed
    if not image.in_bounds(x, y):
        raise PreconditionError(f"seed {tuple(seed)} is outside the image")
    if image.edges[y, x]:
        raise PreconditionError(f"seed {tuple(seed)} is an edge pixel")
    labels, _ = ndimage.label(~image.edges, structure=_FOUR)
    return RegionStats.from_mask(labels == labels[y, x])


def region_components(image: EdgeImage, mask: np.ndarray) -> list:
    """Ground truth for each 4-connected component of ``mask``.

    Ordered by area (largest first), ties by first row-major pixel.
    """
    labels, count = ndimage.label(mask & ~image.edges, structure=_FOUR)
    stats = [RegionStats.from_mask(labels == k) for k in range(1, count + 1)]
    stats.sort(key=lambda s: (-s.area, min((p.y, p.x) for p in s.pixels)))
    return stats


@dataclass(frozen=True)
class ErrorReport:
    centroid_error: float
    area_ratio: float


def compare(est, truth: RegionStats) -> ErrorReport:
    if truth.area <= 0:
        raise ParameterError("ground truth area must be positive")
    cx, cy = est.centroid
    tx, ty = truth.centroid
    return ErrorReport(math.hypot(cx - tx, cy - ty), est.area / truth.area)
