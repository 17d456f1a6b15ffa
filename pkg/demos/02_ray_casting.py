"""Ray casting estimators on convex and non-convex shapes.

Compares a single fan of rays with the iterative variants on the disk and
on the hand, starting from a point in a finger.
"""
# %%
from barriercast import EstimatorConfig, Technique, compare, estimate, generate_scene, preset
from barriercast.edge_image import HAND_FINGER_POINT

# %% [markdown]
# On a disk, one fan of rays from the centre lands on the true centroid.
# From an off-centre start the iterative version walks the inner point
# toward the middle.

# %%
disk, disk_truth = generate_scene(preset("disk"))
for start in [(50, 50), (30, 50)]:
    est, trace = estimate(disk, start, EstimatorConfig("iter_n_ray", n=32, b=1))
    print(f"start {start}: path {[tuple(p) for p in trace.inner_path]}  "
          f"error {compare(est, disk_truth[0]).centroid_error:.3f}")

# %% [markdown]
# In a finger, the rays only see the finger.  Casting rays from the hit
# points (n^y) reaches further, and rasterizing the rays into m x m blocks
# accumulates coverage across iterations.

# %%
hand, hand_truth = generate_scene(preset("hand-v1"))
cfg = EstimatorConfig(n=16, y=2, m=8, b=1, max_iterations=10)
for t in (Technique.N_RAY, Technique.ITER_N_RAY, Technique.ITER_NY_RAY, Technique.ITER_NY_RASTER):
    est, trace = estimate(hand, HAND_FINGER_POINT, cfg.replace(technique=t))
    rep = compare(est, hand_truth[0])
    print(f"{t.value:15s} iterations={len(trace.iterations):2d}  "
          f"centroid error={rep.centroid_error:7.3f}  area ratio={rep.area_ratio:.3f}")
