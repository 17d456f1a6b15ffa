import hashlib

import pytest

from barriercast import EdgeImage, EstimatorConfig, ParameterError, SceneError, estimate
from barriercast.estimators import Trace, ray_pixels
from barriercast.harness import (ExperimentSpec, bench, bench_to_csv, parse_bench_csv, parse_csv,
                                 render_overlay, rows_to_csv, run_experiment)
from barriercast.harness.render import EDGE, RAY, WHITE, overlay
from barriercast.pnm import load_ppm


def spec(**kw):
    doc = {"scene": "disk"}
    doc.update(kw)
    return ExperimentSpec.from_dict(doc)


# ---------------------------------------------------------------- sweeps

def test_repetitions_give_one_row_each():
    rows = run_experiment(spec(repetitions=3))
    assert len(rows) == 3
    assert [r.repetition for r in rows] == [0, 1, 2]
    assert len({(r.area, r.work) for r in rows}) == 1


def test_grid_cardinality_and_order():
    s = spec(degradation={"gap_widths": [1, 2], "gap_counts": [1], "seeds": [0, 1]},
             estimators={"techniques": ["pixel_fill", "n_ray"], "b": [1, 3]})
    rows = run_experiment(s)
    assert len(rows) == 2 * 2 * 2 * 2
    keys = [(r.gap_width, r.gap_seed, r.technique, r.b) for r in rows]
    assert keys == [(w, sd, t, b) for w in (1, 2) for sd in (0, 1)
                    for t in ("pixel_fill", "n_ray") for b in (1, 3)]


def test_csv_byte_identical_and_round_trips():
    s = spec(degradation={"gap_counts": [0, 1], "seeds": [3]},
             estimators={"techniques": ["iter_ny_raster", "grid_cast"], "n": [8], "b": [1, 3]})
    a = rows_to_csv(run_experiment(s))
    assert a == rows_to_csv(run_experiment(s))
    assert a.startswith("# barriercast-results/1\nscene,gap_width,")
    rows = parse_csv(a)
    assert rows == run_experiment(s)
    assert rows_to_csv(rows) == a


def test_parallel_sweep_keeps_order():
    s = spec(estimators={"techniques": ["pixel_fill", "grid_cast", "n_ray"], "b": [1, 3]})
    assert run_experiment(s, workers=2) == run_experiment(s)


def test_timing_column_only_on_request():
    assert run_experiment(spec())[0].wall_time_s is None
    assert run_experiment(spec(), timing=True)[0].wall_time_s >= 0


def test_lost_rows_do_not_abort():
    # (79, 50) is a contour pixel: the estimator precondition fails there
    rows = run_experiment(spec(inner=[[79, 50], [50, 50]]))
    assert [r.status for r in rows] == ["lost", "ok"]
    assert rows[0].area is None and rows[1].area_ratio == pytest.approx(0.9736943907156673)
    assert parse_csv(rows_to_csv(rows)) == rows


def test_barrier_sweep_on_gapped_disk():
    # seed 1 places the width-1 gap where the 4-connected fill can leak through
    s = spec(degradation={"gap_widths": [1], "gap_counts": [1], "seeds": [1]},
             estimators={"techniques": ["pixel_fill"], "b": [1, 3, 5]})
    ratios = [r.area_ratio for r in run_experiment(s)]
    assert ratios[0] > 1.5
    assert ratios == pytest.approx([3.8553191489361702, 0.9736943907156673, 0.9458413926499033])
    assert all(0.9 < r < 1.02 for r in ratios[1:])


def test_inner_rules():
    r = run_experiment(spec())[0]
    assert (r.inner_x, r.inner_y) == (50, 50)
    a = run_experiment(spec(inner={"random": 4}))[0]
    b = run_experiment(spec(inner={"random": 4}))[0]
    assert (a.inner_x, a.inner_y) == (b.inner_x, b.inner_y)
    assert (a.inner_x - 50) ** 2 + (a.inner_y - 50) ** 2 < 30 ** 2
    assert ExperimentSpec.from_dict({"scene": "disk", "inner": {"random": None}}, default_seed=9).inner == ("random", 9)


@pytest.mark.parametrize("doc, field", [
    ({"scene": "disk", "estimators": {"b": [2]}}, "b"),
    ({"scene": "disk", "estimators": {"techniques": ["nope"]}}, "techniques"),
    ({"scene": "disk", "degradation": {"gap_widths": [0]}}, "gap_widths"),
    ({"scene": "disk", "bogus": 1}, "bogus"),
    ({"scene": "disk", "repetitions": 0}, "repetitions"),
    ({"scene": "disk", "inner": "left"}, "inner"),
    ({}, "scene"),
])
def test_invalid_specs_name_the_field(doc, field):
    with pytest.raises((SceneError, ParameterError)) as err:
        ExperimentSpec.from_dict(doc)
    assert field in str(err.value)


# ---------------------------------------------------------------- rendering

def test_empty_trace_is_bare_image(disk_scene):
    blank = EdgeImage.blank(7, 5)
    empty = Trace("n_ray", 1, 8, (), (), (), 0, True)
    rgb = load_ppm(render_overlay(blank, empty, 0))
    assert rgb.shape == (5, 7, 3) and (rgb == WHITE).all()
    image, _ = disk_scene
    rgb = overlay(image, empty)
    assert (rgb[image.edges] == EDGE).all() and (rgb[~image.edges] == WHITE).all()
    with pytest.raises(ParameterError):
        overlay(image, empty, 1)


def test_n_ray_overlay_draws_every_ray(disk_scene):
    image, _ = disk_scene
    _, trace = estimate(image, (50, 50), EstimatorConfig("n_ray", n=32, b=1))
    rgb = overlay(image, trace)
    rays = trace.iterations[0].rays
    assert len(rays) == 32
    for seg in rays:
        # the hit end of each polyline carries the ray colour
        assert tuple(rgb[seg.hit.y, seg.hit.x]) == RAY
        assert all(tuple(rgb[y, x]) == RAY for x, y in ray_pixels(seg) if (x, y) != (50, 50))
    drawn = {(x, y) for seg in rays for x, y in ray_pixels(seg)}
    assert (rgb == RAY).all(axis=2).sum() == len(drawn - {(50, 50)})


def test_overlay_golden(disk_scene):
    image, _ = disk_scene
    _, trace = estimate(image, (50, 50), EstimatorConfig("n_ray", n=32, b=1))
    data = render_overlay(image, trace, 0)
    assert data.startswith(b"P6\n101 101\n255\n")
    assert hashlib.sha256(data).hexdigest() == \
        "93301cce9948d4e63fd7ac96b912c6fb275aedc531adbec2d634f14d04fd821b"


@pytest.mark.parametrize("technique", ["iter_ny_raster", "pixel_fill", "grid_cast"])
def test_overlay_range(hand_scene, technique):
    image, _ = hand_scene
    _, trace = estimate(image, (56, 50), EstimatorConfig(technique, n=8, b=1))
    last = len(trace.iterations) - 1
    assert render_overlay(image, trace, last) == render_overlay(image, trace, last)
    with pytest.raises(ParameterError):
        render_overlay(image, trace, last + 1)
    assert not (overlay(image, trace, last) == WHITE).all(axis=2).all()


# ---------------------------------------------------------------- bench

def test_bench_work_counters():
    s = spec(estimators={"techniques": ["pixel_fill", "grid_cast"], "b": [1, 3]})
    rows = bench(s, repeats=2, warmup=0)
    work = {(r.technique, r.b): r.work for r in rows}
    assert work == {("pixel_fill", 1): 3652, ("pixel_fill", 3): 10836,
                    ("grid_cast", 1): 1308, ("grid_cast", 3): 3828}
    assert work["pixel_fill", 3] / work["pixel_fill", 1] <= 3.5
    assert work["grid_cast", 1] <= work["pixel_fill", 1]
    assert [r.work for r in bench(s, repeats=1, warmup=0)] == [r.work for r in rows]
    parsed = parse_bench_csv(bench_to_csv(rows))
    assert parsed == rows
