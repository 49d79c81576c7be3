import math
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nowhere_smooth import cantor_profile as cp
from nowhere_smooth import polar_curve as pc
from nowhere_smooth import radial_profile as rp
from nowhere_smooth.errors import EmptySample, NonPositiveRadius

from oracles import fd_turn_angle

TAU = math.tau


def test_polar_map():
    assert np.allclose(pc.polar_map(0.0, 1.0), [1.0, 0.0])
    assert np.allclose(pc.polar_map(math.pi / 2, 2.0), [0.0, 2.0])
    with pytest.raises(ValueError):
        pc.polar_map(0.0, -1.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(-10, 10), st.floats(0, 1e6))
def test_polar_map_radius(x, r):
    p = pc.polar_map(x, r)
    assert math.hypot(*p) == pytest.approx(r, rel=1e-12, abs=1e-300)


def test_unit_circle_sample():
    s = pc.sample_curve(rp.constant_profile(1.0), 360)
    assert len(s) == 360 and s.closed
    assert np.allclose(np.hypot(*s.points.T), 1.0)


def test_default_sample(cfg):
    s = pc.sample_curve(rp.as_radial(cfg), 4096)
    assert s.closed
    assert len(s) == 4096 + 2 * (cfg.truncation - 1)
    assert s.parameters[0] == 0.0 and np.allclose(s.points[0], [cfg.L, 0.0])
    assert np.all(np.diff(s.parameters) > 0)
    rel = np.abs(np.hypot(*s.points.T) - s.radii) / s.radii
    assert rel.max() <= 1e-12


def test_one_sided_pairs_capture_corners(cfg):
    s = pc.sample_curve(rp.as_radial(cfg), 64, include_rationals_up_to=3)
    for q in (1.0, 2.0):
        i = np.searchsorted(s.parameters, q)
        assert s.parameters[i - 1] == np.nextafter(q, 0) and s.parameters[i] == np.nextafter(q, 7)


def test_open_curve():
    prof = rp.RadialProfile(lambda x: 1 + x / TAU)
    assert not pc.sample_curve(prof, 64).closed


def test_nonpositive_radius():
    with pytest.raises(NonPositiveRadius):
        pc.sample_curve(rp.RadialProfile(lambda x: np.cos(x)), 64)
    with pytest.raises(ValueError):
        pc.sample_curve(rp.constant_profile(1.0), 8)


def test_closure_for_both_constructions(cfg, ccfg):
    assert pc.sample_curve(rp.as_radial(cfg)).closed
    assert pc.sample_curve(cp.as_radial(cfg, ccfg)).closed


def test_injective_sampling(cfg):
    s = pc.sample_curve(rp.as_radial(cfg), 4096)
    assert len(np.unique(s.points, axis=0)) == len(s)
    # with a positive radius the polar angle of a point recovers its parameter
    ang = np.mod(np.arctan2(s.points[:, 1], s.points[:, 0]), TAU)
    ang[0] = 0.0
    far = np.diff(s.parameters) >= 1e-9
    assert np.all(np.diff(ang)[far] > 0)
    assert np.allclose(ang, s.parameters, atol=1e-12)


def test_turn_angle_formula(cfg):
    assert pc.turn_angle(1.0, 0.0, 0.0) == 0.0
    assert pc.turn_angle(1.0, -1.0, 1.0) == pytest.approx(math.pi / 2)
    w = pc.wedge_turn_angles(cfg, 1)[0]
    assert str(w.location) == "0/1" and w.index == 0
    assert w.turn_angle == pytest.approx(math.atan2(cfg.L, 0.0) - math.atan2(cfg.L, 0.5), abs=1e-12)


def test_wedges_positive_and_sorted(cfg):
    ws = pc.wedge_turn_angles(cfg, cfg.truncation)
    assert len(ws) == cfg.truncation
    angles = [w.turn_angle for w in ws]
    assert all(0 < a < math.pi for a in angles)
    assert angles == sorted(angles, reverse=True)


def test_no_jumps_no_wedges():
    entries = [(None, 0.0, n) for n in range(5)]
    out = pc.wedge_records(entries, lambda q: 2.0, lambda q: (0.3, 0.3))
    assert out == []


@pytest.mark.parametrize("combined", [False, True])
def test_turn_angles_match_finite_differences(cfg, ccfg, combined):
    if combined:
        radius = lambda x: cp.combined_values(x, cfg, ccfg)
        ws = pc.wedge_turn_angles(cfg, 18, ccfg)
    else:
        radius = lambda x: rp.sum_values(x, cfg)
        ws = pc.wedge_turn_angles(cfg, 18)
    assert len(ws) == 18
    for w in ws:
        assert abs(fd_turn_angle(radius, float(w.location)) - w.turn_angle) <= 1e-3


def test_star_shape(cfg):
    rep = pc.star_shape_check(pc.sample_curve(rp.constant_profile(1.0), 64))
    assert rep.min_radius == 1.0 and rep.kernel_contains_origin_ball
    assert pc.star_shape_check(pc.sample_curve(rp.as_radial(cfg))).kernel_contains_origin_ball
    dipping = rp.RadialProfile(lambda x: 0.01 + np.sin(x / 2) ** 2, error=lambda x: np.full_like(x, 0.02))
    assert not pc.star_shape_check(pc.sample_curve(dipping, 64)).kernel_contains_origin_ball


def _square():
    x = np.array([0.0, 1.0, 2.0, 3.0]) * math.pi / 2
    r = np.ones(4)
    return pc.CurveSample(x, r, pc.polar_map(x, r), np.zeros(4), True)


def test_csv():
    data = pc.export_csv(_square()).decode()
    lines = data.splitlines()
    assert lines[0] == "x,radius,px,py,err" and len(lines) == 5
    assert lines[2].startswith("1.5707963267948966,1,")
    assert pc.export_csv(_square()) == pc.export_csv(_square())


def test_svg(cfg):
    s = pc.sample_curve(rp.as_radial(cfg))
    ws = pc.wedge_turn_angles(cfg, 18)
    svg = pc.export_svg(s, ws).decode()
    assert svg.count('class="wedge"') == 18
    assert 'width="1024"' in svg
    assert pc.export_svg(s, ws) == pc.export_svg(s, ws)
    small = pc.export_svg(s, ws[:1], {"canvas": 256, "stroke": "#ff0000"}).decode()
    assert 'width="256"' in small and "#ff0000" in small and small.count("<circle") == 1
    # every coordinate lies inside the canvas
    nums = [float(v) for v in re.findall(r"[ML] ([-\d.]+) ([-\d.]+)", svg)[0]]
    assert all(0 <= v <= 1024 for v in nums)


def test_empty_exports():
    e = pc.CurveSample(np.array([]), np.array([]), np.zeros((0, 2)), np.array([]), False)
    with pytest.raises(EmptySample):
        pc.export_csv(e)
    with pytest.raises(EmptySample):
        pc.export_svg(e)
