"""Casting- and filling-based object projection feature estimation with barriers.

Given a binary edge image and an inner point, estimate the centroid and an
area proxy of the region around the point, using ray casting, iterative and
recursive ray casting, block rasterization, pixel filling or grid casting.
Every traversal step can be guarded by a barrier probe that makes the
estimators tolerant to short gaps in the edges.
"""

from .edge_image import (Capsule, DegradationSpec, Disk, EdgeImage, Gap, PixelPos, Rectangle,
                         SceneSpec, degrade, generate_scene, preset)
from .errors import (BarrierCastError, ParameterError, PBMFormatError, PreconditionError,
                     SceneError)
from .estimators import (EstimatorConfig, FeatureEstimate, Technique, Trace, estimate,
                         estimate_grid_cast, estimate_iter_n_ray, estimate_iter_ny_raster,
                         estimate_iter_ny_ray, estimate_n_ray, estimate_pixel_fill,
                         recenter_inner_point)
from .oracle import ErrorReport, GroundTruth, RegionStats, compare, flood_region
from .pnm import load_pbm, save_pbm
from .traversal import RayHit, barrier_pixels, blocked, cast_ray, step_line

__version__ = "0.1.0"
