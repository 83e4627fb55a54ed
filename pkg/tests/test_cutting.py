import itertools
import json
import math

import numpy as np
import pytest

import pfaffinc as pf
from pfaffinc import cutting as ct
from pfaffinc import generators as gen
from pfaffinc.errors import CuttingFailed

VP = (-2.0, 2.0, -2.0, 2.0)


# -- sample_curves ---------------------------------------------------------------

def test_sampling_is_reproducible_and_bounded():
    a = ct.sample_curves(10, 10, seed=123)
    b = ct.sample_curves(10, 10, seed=123)
    assert a == b
    assert 1 <= len(a) <= 10
    assert all(0 <= i < 10 for i in a)


def test_single_draw_gives_one_curve():
    assert len(ct.sample_curves(50, 1, seed=0)) == 1


def test_sample_size_matches_with_replacement_expectation():
    # analytic oracle: E|S| = n (1 - (1 - 1/n)^s)
    n, s = 100, 200
    expected = n * (1 - (1 - 1 / n) ** s)
    sizes = [len(ct.sample_curves(n, s, seed)) for seed in range(1000)]
    assert abs(np.mean(sizes) - expected) <= 2.0


# -- build_rays -------------------------------------------------------------------

def test_two_crossing_lines_shoot_two_full_rays():
    curves = [pf.line(1, 0), pf.line(-1, 0)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    rays = pf.build_rays([0, 1], curves, traces, VP)
    assert len(rays) == 2
    spans = sorted((r.y_lo, r.y_hi) for r in rays)
    assert spans == [(-2.0, 0.0), (0.0, 2.0)]


def test_lone_circle_shoots_four_rays():
    c = pf.circle(0, 0, 1)
    traces = [pf.trace_curve(c, VP)]
    rays = pf.build_rays([0], [c], traces, VP)
    assert len(rays) == 4
    assert sorted(round(r.x, 6) for r in rays) == [-1.0, -1.0, 1.0, 1.0]


def test_parabola_touching_line_shoots_two_rays():
    curves = [pf.parabola(1, 0, 0), pf.line(0, 0)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    rays = pf.build_rays([0, 1], curves, traces, VP)
    assert len(rays) == 2
    assert all(abs(r.x) <= 1e-6 for r in rays)


# -- build_cells --------------------------------------------------------------------

def test_single_horizontal_line_splits_plane_in_two():
    c = pf.line(0, 0.5)
    cells = pf.build_cells([0], [c], [pf.trace_curve(c, VP)], VP)
    assert len(cells) == 2


def test_two_crossing_lines_give_six_cells():
    # by hand: two slabs of three regions each, full-height wall at x = 0
    curves = [pf.line(1, 0), pf.line(-1, 0)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    cells = pf.build_cells([0, 1], curves, traces, VP)
    assert len(cells) == 6


def test_empty_sample_keeps_whole_viewport():
    cells = pf.build_cells([], [], [], VP)
    assert len(cells) == 1
    assert cells[0].corner_count == 4


def test_cell_corner_counts_within_four():
    scene = gen.random_scene(["line", "circle", "parabola"], m=0, n=12,
                             planted=0.0, seed=3)
    traces = scene.traces()
    cells = pf.build_cells([0, 2, 4, 6], scene.curves, traces, scene.viewport)
    assert all(0 <= c.corner_count <= 4 for c in cells)
    assert all(c.x_hi > c.x_lo for c in cells)


# -- cell_crossings -------------------------------------------------------------------

def test_whole_viewport_cell_sees_every_curve():
    scene = gen.random_scene(["line", "parabola"], m=0, n=7, planted=0.0, seed=5)
    traces = scene.traces()
    cell = pf.build_cells([], [], [], scene.viewport)[0]
    assert pf.cell_crossings(cell, None, scene.curves, traces) == 7


def test_region_beyond_all_curves_is_empty():
    curves = [pf.line(0, -1.0), pf.line(0, -0.5)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    for seed in range(20):
        cut = pf.build_cutting(curves, traces, VP, r=1, seed=seed)
        if sorted(cut.sample) == [0, 1]:
            break
    else:
        pytest.skip("no seed sampled both lines")
    assert cut.max_crossings() == 0


def test_cell_crossings_against_line_algebra_oracle(line_scene):
    scene, traces, cut = line_scene
    slopes = {i: c.params for i, c in enumerate(scene.curves)}
    x0, x1, y0, y1 = scene.viewport
    checked = 0
    for cell in cut.cells:
        if checked >= 10:
            break
        if cell.bottom is None or cell.top is None:
            continue
        checked += 1
        sb, tb = slopes[cell.bottom[0]]
        st_, tt = slopes[cell.top[0]]
        xs = np.linspace(cell.x_lo + 1e-6, cell.x_hi - 1e-6, 1000)
        lo = sb * xs + tb
        hi = st_ * xs + tt
        expected = set()
        for i, (s, t) in slopes.items():
            if i in cut.sample:
                continue
            ys = s * xs + t
            if np.any((ys > lo + 1e-9) & (ys < hi - 1e-9)
                      & (ys > y0) & (ys < y1)):
                expected.add(i)
        got = cut._crossings[cell.id]
        assert got == expected, (cell.id, sorted(got), sorted(expected))
    assert checked == 10


# -- build_cutting -----------------------------------------------------------------------

def test_random_line_scene_certifies_quickly():
    scene = gen.random_scene(["line"], m=0, n=50, planted=0.0, seed=17)
    traces = scene.traces()
    cut = pf.build_cutting(scene.curves, traces, scene.viewport, r=2, seed=4)
    assert cut.retries_used <= 3
    assert cut.max_crossings() <= 50 / 2
    assert len(cut.cells) <= 50 * 4 * math.log(50) ** 2


def test_sampling_everything_certifies_trivially():
    scene = gen.random_scene(["line"], m=0, n=5, planted=0.0, seed=2)
    traces = scene.traces()
    cut = pf.build_cutting(scene.curves, traces, scene.viewport, r=4, seed=0)
    assert cut.max_crossings() <= 5 / 4


def test_two_curves_r_one_always_passes():
    curves = [pf.line(1, 0), pf.line(-1, 0.5)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    cut = pf.build_cutting(curves, traces, VP, r=1, seed=0)
    assert cut.s == math.ceil(5 * math.log(2))
    assert cut.retries_used == 0
    assert cut.max_crossings() <= 2


def test_invalid_r_rejected():
    curves = [pf.line(1, 0), pf.line(-1, 0.5)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    with pytest.raises(ValueError):
        pf.build_cutting(curves, traces, VP, r=2, seed=0)


# -- locate_point -----------------------------------------------------------------------

def test_locate_in_single_cell_cutting():
    cut = ct.trivial_cutting(VP)
    for p in ((0.0, 0.0), (-1.9, 1.9), (1.5, -0.5)):
        loc = pf.locate_point(cut, p)
        assert loc.kind == "interior" and loc.cell == 0


def test_locate_in_near_trivial_cutting():
    curves = [pf.line(0, -1.9), pf.line(0, -1.8)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    cut = pf.build_cutting(curves, traces, VP, r=1, seed=1)
    loc = pf.locate_point(cut, (0.0, 1.0))
    assert loc.kind == "interior"
    top_cells = {pf.locate_point(cut, (x, 1.0)).cell for x in (-1.5, 0.0, 1.5)}
    assert len(top_cells) == 1


def test_point_on_sampled_line_is_boundary(line_scene):
    scene, traces, cut = line_scene
    cid = cut.sample[0]
    s, t = scene.curves[cid].params
    p = (0.1, s * 0.1 + t)
    if not (scene.viewport[2] < p[1] < scene.viewport[3]):
        pytest.skip("probe point left the viewport")
    loc = pf.locate_point(cut, p)
    assert loc.kind == "boundary"
    assert len(loc.cells) >= 2 or loc.on[0] == "ray"


def test_locate_matches_linear_scan(line_scene):
    scene, traces, cut = line_scene
    rng = np.random.default_rng(77)
    x0, x1, y0, y1 = scene.viewport
    checked = 0
    for _ in range(1000):
        p = rng.uniform((x0 + 0.01, y0 + 0.01), (x1 - 0.01, y1 - 0.01))
        loc = pf.locate_point(cut, p)
        if loc.kind != "interior":
            continue
        # linear scan oracle over all cells
        matches = []
        k = int(np.searchsorted(cut.slab_xs, p[0], side="right") - 1)
        for cell in cut.cells:
            for (kk, rr) in cell.regions:
                if kk != k:
                    continue
                lo, hi = cut._region_bounds(kk, rr, p[0])
                if lo + 1e-7 < p[1] < hi - 1e-7:
                    matches.append(cell.id)
        if len(matches) == 1:
            checked += 1
            assert matches[0] == loc.cell
    assert checked > 800


def test_partition_covers_viewport(line_scene):
    scene, traces, cut = line_scene
    rng = np.random.default_rng(5)
    x0, x1, y0, y1 = scene.viewport
    for _ in range(1000):
        p = rng.uniform((x0 + 1e-6, y0 + 1e-6), (x1 - 1e-6, y1 - 1e-6))
        loc = pf.locate_point(cut, p)
        if loc.kind == "interior":
            assert 0 <= loc.cell < len(cut.cells)
        else:
            assert len(loc.cells) >= 1 and loc.on


def test_cell_areas_partition_viewport(line_scene):
    scene, traces, cut = line_scene
    x0, x1, y0, y1 = scene.viewport
    total = sum(cut.cell_area(c) for c in cut.cells)
    assert abs(total - (x1 - x0) * (y1 - y0)) <= 1e-6 * (x1 - x0) * (y1 - y0)


def test_ray_count_bounded_by_events(line_scene):
    scene, traces, cut = line_scene
    from pfaffinc.intersect import intersect_curves, vertical_tangent_points

    crossings = 0
    for i, j in itertools.combinations(cut.sample, 2):
        crossings += len(intersect_curves(scene.curves[i], scene.curves[j],
                                          traces[i], traces[j]))
    tangents = sum(len(vertical_tangent_points(scene.curves[i], traces[i]))
                   for i in cut.sample)
    assert len(cut.rays) <= 2 * (crossings + tangents)


def test_cutting_serialization_is_reproducible():
    scene = gen.random_scene(["line", "circle"], m=0, n=12, planted=0.0, seed=8)
    traces = scene.traces()
    a = pf.build_cutting(scene.curves, traces, scene.viewport, r=2, seed=21)
    b = pf.build_cutting(scene.curves, traces, scene.viewport, r=2, seed=21)
    ja = json.dumps(a.to_dict(), sort_keys=True)
    jb = json.dumps(b.to_dict(), sort_keys=True)
    assert ja == jb


def test_failed_certification_raises():
    # one point-heavy viewport with r too aggressive for two parallel packs
    curves = [pf.line(0, -1.99 + 0.001 * i) for i in range(4)]
    traces = [pf.trace_curve(c, VP) for c in curves]
    try:
        cut = pf.build_cutting(curves, traces, VP, r=3, seed=0, max_retries=2)
    except CuttingFailed:
        return
    assert cut.max_crossings() <= 4 / 3
