"""Parameter sweeps and work benchmarks.

The same JSON document drives ``barriercast sweep`` and ``barriercast
bench``; here it is used from Python.
"""
# %%
import csv
import io
import statistics

from barriercast.harness import ExperimentSpec, bench, rows_to_csv, run_experiment

spec = ExperimentSpec.from_dict({
    "scene": "disk",
    "degradation": {"gap_widths": [1, 2], "gap_counts": [1], "seeds": list(range(5))},
    "estimators": {"techniques": ["n_ray", "pixel_fill", "grid_cast"], "b": [1, 3]},
})

# %%
text = rows_to_csv(run_experiment(spec))
print(text.splitlines()[0], "-", len(text.splitlines()) - 2, "rows")

# %% [markdown]
# Median area ratio per technique and barrier size, over gap widths and seeds:

# %%
rows = list(csv.DictReader(io.StringIO(text.split("\n", 1)[1])))
groups = {}
for r in rows:
    groups.setdefault((r["technique"], r["b"]), []).append(float(r["area_ratio"]))
for (t, b), v in sorted(groups.items()):
    print(f"{t:10s} b={b}  median area ratio {statistics.median(v):.3f}")

# %% [markdown]
# Work counters do not depend on the machine, so the barrier overhead can be
# read off directly.

# %%
for r in bench(spec, repeats=3):
    print(f"{r.technique:10s} b={r.b}  work={r.work:6d}  median {r.median_s * 1e3:.2f} ms")
