import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import ndimage

from barriercast import (Capsule, DegradationSpec, Disk, EdgeImage, Gap, PixelPos, Rectangle,
                         SceneError, SceneSpec, degrade, generate_scene, preset)
from barriercast.edge_image import (boundary_of, contour_walk, degradation_from_dict,
                                    degradation_to_dict, random_scene, scene_from_dict,
                                    scene_to_dict, straight_gap, straight_runs)
from barriercast.oracle import flood_region


def brute_force_disk_interior(size, cx, cy, r):
    # inside pixels whose whole 3x3 neighbourhood is inside
    count = 0
    xs = []
    ys = []
    inside = lambda x, y: (x - cx) ** 2 + (y - cy) ** 2 <= r * r
    for y in range(size):
        for x in range(size):
            if all(inside(x + dx, y + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)):
                count += 1
                xs.append(x)
                ys.append(y)
    return count, (sum(xs) / count, sum(ys) / count)


def test_edge_image_border_is_edge():
    img = EdgeImage.blank(5, 4)
    assert img.width == 5 and img.height == 4
    assert not img.is_edge(0, 0)
    assert img.is_edge(-1, 0) and img.is_edge(5, 0) and img.is_edge(0, 4)


def test_edge_image_is_immutable():
    img = EdgeImage.blank(5, 5)
    with pytest.raises(ValueError):
        img.edges[0, 0] = True


def test_edge_image_rejects_tiny():
    with pytest.raises(SceneError):
        EdgeImage(np.zeros((2, 5), dtype=bool))


def test_disk_ground_truth_area_matches_brute_force(disk_scene):
    image, truths = disk_scene
    count, centroid = brute_force_disk_interior(101, 50, 50, 30)
    assert count == 2585
    assert truths[0].area == 2585
    assert truths[0].centroid == (50.0, 50.0)
    assert centroid == (50.0, 50.0)


def test_rectangle_ground_truth(rect_scene):
    _, truths = rect_scene
    assert len(truths) == 1
    assert truths[0].area == (31 - 2) * (21 - 2) == 551
    assert truths[0].centroid == (25.0, 20.0)


def test_ground_truth_invariants(hand_scene):
    image, truths = hand_scene
    assert len(truths) == 1
    t = truths[0]
    xs = [p.x for p in t.pixels]
    ys = [p.y for p in t.pixels]
    assert t.area == len(t.pixels)
    assert t.centroid == pytest.approx((np.mean(xs), np.mean(ys)))
    assert not any(image.edges[p.y, p.x] for p in t.pixels)
    mask = t.mask(image.width, image.height)
    assert ndimage.label(mask, structure=ndimage.generate_binary_structure(2, 1))[1] == 1


def test_contours_are_closed(hand_scene, disk_scene, rect_scene):
    for image, truths in (hand_scene, disk_scene, rect_scene):
        region = flood_region(image, next(iter(truths[0].pixels)))
        assert all(0 < p.x < image.width - 1 and 0 < p.y < image.height - 1 for p in region.pixels)
        # every edge pixel has at least two 8-neighbour edge pixels (no loose ends)
        e = image.edges
        p = np.pad(e, 1)
        nbrs = sum(p[1 + dy:1 + dy + e.shape[0], 1 + dx:1 + dx + e.shape[1]].astype(int)
                   for dy in (-1, 0, 1) for dx in (-1, 0, 1) if dx or dy)
        assert (nbrs[e] >= 2).all()


def test_boundary_is_four_connected_ring():
    filled = np.zeros((9, 9), dtype=bool)
    filled[2:7, 2:7] = True
    ring = boundary_of(filled)
    assert ring.sum() == 16
    assert not ring[3:6, 3:6].any()


def test_shape_out_of_bounds_names_index():
    spec = SceneSpec(40, 40, (Disk(PixelPos(20, 20), 5), Rectangle(PixelPos(1, 5), 10, 10)))
    with pytest.raises(SceneError) as err:
        generate_scene(spec)
    assert err.value.index == 1


def test_margin_is_two_pixels():
    generate_scene(SceneSpec(20, 20, (Rectangle(PixelPos(2, 2), 16, 16),)))
    with pytest.raises(SceneError):
        generate_scene(SceneSpec(20, 20, (Rectangle(PixelPos(2, 2), 17, 16),)))


def test_capsule_rasterization():
    cap = Capsule(PixelPos(10, 10), PixelPos(20, 10), 3)
    ys, xs = np.mgrid[0:30, 0:30]
    m = cap.mask(xs, ys)
    assert m[10, 7] and m[10, 23] and m[13, 15] and not m[14, 15] and not m[10, 24]


def test_scene_json_round_trip():
    spec = preset("hand-v1")
    assert scene_from_dict(scene_to_dict(spec)) == spec
    assert scene_from_dict({"preset": "disk"}) == preset("disk")
    with pytest.raises(SceneError):
        scene_from_dict({"width": 10, "height": 10, "shapes": [{"type": "hexagon"}]})
    with pytest.raises(SceneError):
        preset("nope")


def test_degrade_single_gap(disk_scene):
    image, _ = disk_scene
    out = degrade(image, DegradationSpec(gaps=(Gap(PixelPos(50, 20), 1),)))
    diff = image.edges ^ out.edges
    assert diff.sum() == 1
    y, x = np.argwhere(diff)[0]
    assert image.edges[y, x] and not out.edges[y, x]


def test_degrade_random_is_deterministic(disk_scene):
    image, _ = disk_scene
    spec = DegradationSpec(rng_seed=7, random_gap_count=3, random_gap_width=2)
    a = degrade(image, spec)
    b = degrade(image, spec)
    assert a == b
    diff = image.edges ^ a.edges
    assert diff.sum() == 6
    assert (image.edges[diff]).all()
    assert degrade(image, DegradationSpec(rng_seed=8, random_gap_count=3, random_gap_width=2)) != a


def test_degrade_gap_follows_contour(rect_scene):
    image, _ = rect_scene
    out = degrade(image, DegradationSpec(gaps=(Gap(PixelPos(20, 8), 4),)))
    cleared = np.argwhere(image.edges & ~out.edges)
    # nearest edge pixel to (20, 8) is (20, 10); the walk runs along +x
    assert sorted((int(x), int(y)) for y, x in cleared) == [(20, 10), (21, 10), (22, 10), (23, 10)]


def test_degrade_rejects_far_gap(disk_scene):
    image, _ = disk_scene
    with pytest.raises(SceneError) as err:
        degrade(image, DegradationSpec(gaps=(Gap(PixelPos(50, 20), 1), Gap(PixelPos(50, 50), 2))))
    assert err.value.index == 1
    with pytest.raises(SceneError):
        degrade(image, DegradationSpec(gaps=(Gap(PixelPos(50, 20), 0),)))


def test_degradation_json_round_trip():
    spec = DegradationSpec(gaps=(Gap(PixelPos(3, 4), 2),), rng_seed=5, random_gap_count=2,
                           random_gap_width=3)
    assert degradation_from_dict(degradation_to_dict(spec)) == spec


def test_contour_walk_stops_at_end():
    e = np.zeros((5, 9), dtype=bool)
    e[2, 2:6] = True
    assert contour_walk(e, (2, 2), 10) == [(2, 2), (3, 2), (4, 2), (5, 2)]


def test_straight_runs_and_gap_placement(rect_scene):
    image, _ = rect_scene
    runs = straight_runs(image, 10)
    assert ((PixelPos(10, 10), (1, 0), 31) in runs) and ((PixelPos(10, 10), (0, 1), 21) in runs)
    rng = np.random.default_rng(0)
    for _ in range(20):
        gap = straight_gap(image, rng, 3, 2)
        out = degrade(image, DegradationSpec(gaps=(gap,)))
        assert (image.edges ^ out.edges).sum() == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 4))
def test_degrade_only_removes_exact_count(seed, count, width):
    image, _ = generate_scene(random_scene(np.random.default_rng(seed)))
    try:
        out = degrade(image, DegradationSpec(rng_seed=seed, random_gap_count=count,
                                             random_gap_width=width))
    except SceneError:
        return  # contour too short for the requested gaps
    assert not (out.edges & ~image.edges).any()
    assert (image.edges & ~out.edges).sum() == count * width


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_scenes_have_sealed_regions(seed):
    image, truths = generate_scene(random_scene(np.random.default_rng(seed)))
    assert truths
    for t in truths:
        assert all(0 < p.x < image.width - 1 and 0 < p.y < image.height - 1 for p in t.pixels)
