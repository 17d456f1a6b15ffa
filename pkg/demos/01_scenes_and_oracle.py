"""Scenes, edge images and exact ground truth.

Builds the three preset scenes, shows how the contour is drawn, and checks
the exact region statistics that every estimator is later scored against.
Run with ``python3 demos/01_scenes_and_oracle.py``.
"""
# %%
import numpy as np

from barriercast import flood_region, generate_scene, preset, save_pbm
from barriercast.edge_image import random_scene

# %% [markdown]
# A scene is a list of filled shapes.  The edge image marks every filled
# pixel that touches the outside (8-neighbourhood), so contours are
# 4-connected and a 4-connected fill can never slip through diagonally.

# %%
for name in ("disk", "rect", "hand-v1"):
    image, truths = generate_scene(preset(name))
    t = truths[0]
    print(f"{name:8s} {image.width}x{image.height}  edges={int(image.edges.sum()):5d}  "
          f"regions={len(truths)}  area={t.area}  centroid=({t.centroid[0]:.2f}, {t.centroid[1]:.2f})")

# %% [markdown]
# The top-left corner of the disk contour, as text:

# %%
image, truths = generate_scene(preset("disk"))
for row in image.edges[19:27, 40:60]:
    print("".join("#" if v else "." for v in row))

# %% [markdown]
# ``flood_region`` is the oracle.  Any seed inside the same region gives the
# same answer.

# %%
a = flood_region(image, (50, 50))
b = flood_region(image, (30, 45))
print("same region from two seeds:", a == b, " area", a.area)

# %% [markdown]
# Random scenes are used for property tests.  They are reproducible from
# their RNG seed.

# %%
rng = np.random.default_rng(7)
rimg, rtruths = generate_scene(random_scene(rng))
print("random scene regions:", [t.area for t in rtruths])
print("P4 bytes for the disk:", len(save_pbm(image)))
