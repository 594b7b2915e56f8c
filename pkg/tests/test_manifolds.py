import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from mmsplan.curves import evaluate
from mmsplan.geometry import Configuration, RationalRotation, Scene, pt, rotation_at
from mmsplan.manifolds import (
    AngleConstraint,
    CriticalCurve,
    Degenerate,
    SegmentConstraint,
    angle_primitive,
    chart_robot,
    clip_validity,
    critical_curves,
    edge_vertex_curve,
    intersect_layer_segment,
    obstacle_features,
    segment_primitive,
    slab_cell_of,
    vertex_edge_contact,
    vertex_edge_curve,
)
from mmsplan.numeric import compare, rational_between, to_float
from oracles import obstacle_vertex_on_robot_edge_residual, scene_collides, vertex_on_line_residual
from helpers import random_constraint, random_rational, random_scene, square

P = pt
RECT_ROBOT = [pt(0, 0), pt(2, 0), pt(2, "1/2"), pt(0, "1/2")]


def two_block_scene():
    return Scene((0, 0, 10, 10), RECT_ROBOT, [square(4, 4, 6, 6), [pt(7, 1), pt(9, 2), pt(8, 3)]])


def face_probes(arr, face, rnd, k):
    """Rational points strictly inside a face, spread over its trapezoids."""
    out = []
    traps = arr.face_traps[face]
    for _ in range(20 * k):
        if len(out) == k:
            break
        t = rnd.choice(traps)
        slab, _ = arr.trap_slab(t)
        a, b = arr.events[slab], arr.events[slab + 1]
        x = rational_between(a, b) if rnd.random() < 0.2 else mpq(rnd.uniform(to_float(a), to_float(b)))
        if not (compare(a, x) < 0 and compare(x, b) < 0):
            continue
        lo, hi = arr.trap_bounds(t)
        ylo, yhi = arr.bound_value(lo, x), arr.bound_value(hi, x)
        y = ylo + (yhi - ylo) * mpq(rnd.randint(1, 999), 1000)
        loc = arr.locate((x, y))
        if loc.kind == "face" and loc.face == face:
            out.append((x, y))
    return out


# --- critical curve examples ------------------------------------------------


def test_vertex_reaching_line_halfway():
    f = vertex_edge_curve(P(0, 0), (1, 0, -1), P(0, 0), P(2, 0))
    assert f.is_constant and f.constant_value == mpq(1, 2)


def test_offset_vertex_curve():
    f = vertex_edge_curve(P(1, 0), (1, 0, -2), P(0, 0), P(2, 0))
    assert (f.num, f.den) == ((1, 0, 3), (2, 0, 2))
    assert evaluate(f, 0) == mpq(1, 2) and evaluate(f, 1) == 1
    for tau in (0, 1, 2):
        assert vertex_on_line_residual((1, 0), (1, 0, -2), (0, 0), (2, 0), tau, evaluate(f, tau)) == 0


def test_parallel_motion_is_degenerate():
    d = vertex_edge_curve(P(0, 0), (1, 0, -1), P(0, 0), P(0, 2))
    assert isinstance(d, Degenerate) and d.roots == ()


def test_edge_vertex_removable_singularity():
    f, walls = edge_vertex_curve(P(-1, 0), P(1, 0), P(0, 1), P(0, 0), P(0, 2))
    assert f.is_constant and f.constant_value == mpq(1, 2)
    # the cancelled factor tau^2 - 1 marks orientations touching for every alpha
    assert sorted(float(w) for w in walls) == [-1.0, 1.0]
    for tau in (0, mpq(1, 2), 2):
        assert obstacle_vertex_on_robot_edge_residual((-1, 0), (1, 0), (0, 1), (0, 0), (0, 2), tau, mpq(1, 2)) == 0


def test_edge_vertex_contact_at_start():
    # robot edge through the origin, obstacle vertex at s
    f, _ = edge_vertex_curve(P(0, 0), P(1, 0), P(0, 0), P(0, 0), P(0, 1))
    assert evaluate(f, 0) == 0


def test_clip_to_alpha_at_most_one():
    v, line, s, t = P(1, 0), (1, 0, -2), P(0, 0), P(2, 0)
    f = vertex_edge_curve(v, line, s, t)
    e1, e2 = P(2, -100), P(2, 100)
    cc = CriticalCurve(f, ("vertex-edge", 0, (e1, e2)), vertex_edge_contact(v, e1, e2, s, t, f))
    (lo, hi), = clip_validity(cc, mpq(-3), mpq(3))
    assert compare(lo, -1) == 0 and compare(hi, 1) == 0


def test_clip_constant_is_full_range():
    v, line, s, t = P(0, 0), (1, 0, -1), P(0, 0), P(2, 0)
    f = vertex_edge_curve(v, line, s, t)
    e1, e2 = P(1, -100), P(1, 100)
    cc = CriticalCurve(f, ("vertex-edge", 0, (e1, e2)), vertex_edge_contact(v, e1, e2, s, t, f))
    assert clip_validity(cc, mpq(-1, 2), mpq(1, 2)) == [(mpq(-1, 2), mpq(1, 2))]


def test_clip_at_edge_endpoint():
    # vertex (1, 0) touching x = 2 at height 2 tau / (1 + tau^2) * 1; edge stops at y = 4/5
    v, s, t = P(1, 0), P(0, 0), P(2, 0)
    e1, e2 = P(2, -10), P(2, mpq(4, 5))
    f = vertex_edge_curve(v, (1, 0, -2), s, t)
    cc = CriticalCurve(f, ("vertex-edge", 0, (e1, e2)), vertex_edge_contact(v, e1, e2, s, t, f))
    (lo, hi), = clip_validity(cc, mpq(-1, 2), mpq(1))
    # sin(theta) = 4/5 at tau = 1/2
    assert compare(lo, mpq(-1, 2)) == 0 and compare(hi, mpq(1, 2)) == 0


# --- contact residual property ----------------------------------------------


def _check_residuals(scene, c, rnd, per_curve=3):
    robot = chart_robot(scene.robot, c.chart)
    curves, _ = critical_curves(scene, c)
    checked = 0
    for cc in curves:
        for lo, hi in cc.validity:
            for _ in range(per_curve):
                tau = rational_between(lo, hi) if checked % 2 else mpq(rnd.uniform(to_float(lo), to_float(hi)))
                if not (compare(lo, tau) < 0 and compare(tau, hi) < 0):
                    continue
                alpha = evaluate(cc.alpha, tau)
                kind = cc.source[0]
                if kind == "vertex-edge":
                    _, i, (e1, e2) = cc.source
                    line = (e2[1] - e1[1], -(e2[0] - e1[0]), e2[0] * e1[1] - e1[0] * e2[1])
                    r = vertex_on_line_residual(robot[i], line, c.s, c.t, tau, alpha)
                else:
                    _, i, v0 = cc.source
                    r = obstacle_vertex_on_robot_edge_residual(robot[i], robot[(i + 1) % len(robot)], v0, c.s, c.t, tau, alpha)
                assert r == 0
                assert 0 <= alpha <= 1
                checked += 1
    return checked


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.sampled_from("AB"))
def test_contact_residuals_vanish(seed, chart):
    rnd = random.Random(seed)
    scene = random_scene(rnd)
    _check_residuals(scene, random_constraint(rnd, chart), rnd)


# --- layers -----------------------------------------------------------------


def test_empty_layer_is_workspace():
    scene = Scene((0, 0, 10, 10), RECT_ROBOT, [])
    m = angle_primitive(scene, AngleConstraint(RationalRotation.identity()))
    assert len(m.fscs) == 1
    cell = m.fscs[0]
    assert cell.area == 8 * mpq(19, 2)


def test_point_robot_layer_is_workspace_minus_obstacles():
    tri = [pt(0, 0), pt(mpq(1, 100), 0), pt(0, mpq(1, 100))]
    scene = Scene((0, 0, 10, 10), tri, [square(0, 4, 10, 6)])
    m = angle_primitive(scene, rotation_at(0.0))
    assert len(m.fscs) == 2


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.floats(-3.1, 3.1))
def test_layer_membership_matches_collision(seed, theta):
    rnd = random.Random(seed)
    scene = random_scene(rnd)
    rot = rotation_at(theta)
    m = angle_primitive(scene, rot)
    for _ in range(60):
        p = (random_rational(rnd, 0, 10), random_rational(rnd, 0, 10))
        inside = [cell.contains(p) for cell in m.fscs]
        if 0 in inside:
            continue  # on a cell boundary: contact, free by convention
        assert (1 in inside) == (not scene_collides(scene, Configuration(p, rot)))


# --- slabs ------------------------------------------------------------------


def test_empty_slab_is_one_cell():
    scene = Scene((0, 0, 10, 10), RECT_ROBOT, [])
    c = SegmentConstraint(P(3, 3), P(7, 6), mpq(-1, 4), mpq(1, 4))
    m = segment_primitive(scene, c)
    assert len(m.fscs) == 1 and m.arrangement.num_bounded_faces == 1


def test_segment_inside_obstacle_has_no_cells():
    scene = Scene((0, 0, 10, 10), RECT_ROBOT, [square(1, 1, 9, 9)])
    m = segment_primitive(scene, SegmentConstraint(P(4, 5), P(6, 5), mpq(-1, 4), mpq(1, 4)))
    assert m.fscs == []


def _check_slab(scene, c, rnd, per_face=20):
    m = segment_primitive(scene, c)
    arr = m.arrangement
    free = set(m.fscs)
    n = 0
    for f in range(arr.num_bounded_faces):
        for tau, alpha in face_probes(arr, f, rnd, per_face):
            assert (f in free) == (not scene_collides(scene, c.configuration(tau, alpha)))
            n += 1
    return m, n


def test_slab_classification_on_fixed_scene():
    rnd = random.Random(3)
    c = SegmentConstraint(P(2, 5), P(8, 5), mpq(-1, 2), mpq(1, 2))
    m, n = _check_slab(two_block_scene(), c, rnd, per_face=10)
    assert len(m.fscs) >= 2 and n > 0


@settings(max_examples=8)
@given(st.integers(0, 10**6), st.sampled_from("AB"))
def test_slab_classification_matches_collision(seed, chart):
    rnd = random.Random(seed)
    _check_slab(random_scene(rnd), random_constraint(rnd, chart), rnd, per_face=5)


def test_charts_agree():
    scene = two_block_scene()
    s, t = P(2, 5), P(8, 5)
    a = SegmentConstraint(s, t, mpq(1, 4), mpq(1, 2), "A")
    b = SegmentConstraint(s, t, -1 / a.tau_lo, -1 / a.tau_hi, "B")
    ma, mb = segment_primitive(scene, a), segment_primitive(scene, b)
    assert len(ma.fscs) == len(mb.fscs)
    for k in range(1, 6):
        tau = a.tau_lo + (a.tau_hi - a.tau_lo) * mpq(k, 6)
        assert a.rotation(tau) == b.rotation(-1 / tau)
        fa = ma.arrangement.vertical_fiber(tau)
        fb = mb.arrangement.vertical_fiber(-1 / tau)
        ends_a = [(to_float(lo), to_float(hi), f in ma.fscs) for f, (lo, hi) in fa]
        ends_b = [(to_float(lo), to_float(hi), f in mb.fscs) for f, (lo, hi) in fb]
        assert len(ends_a) == len(ends_b)
        for x, y in zip(ends_a, ends_b):
            assert x[2] == y[2]
            assert x[0] == pytest.approx(y[0], abs=1e-12) and x[1] == pytest.approx(y[1], abs=1e-12)


# --- layer / slab intersection ----------------------------------------------


def test_obstacle_free_intersection():
    scene = Scene((0, 0, 10, 10), RECT_ROBOT, [])
    c = SegmentConstraint(P(3, 3), P(7, 6), mpq(-1, 4), mpq(1, 4))
    slab = segment_primitive(scene, c)
    layer = angle_primitive(scene, RationalRotation.from_tau(mpq(1, 8)))
    pairs = intersect_layer_segment(layer, slab)
    assert [(a, b) for a, b, _ in pairs] == [(0, 0)]
    outside = angle_primitive(scene, RationalRotation.from_tau(mpq(1, 2)))
    assert intersect_layer_segment(outside, slab) == []


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_intersection_witnesses(seed):
    rnd = random.Random(seed)
    scene = random_scene(rnd)
    c = random_constraint(rnd)
    slab = segment_primitive(scene, c)
    for _ in range(3):
        tau = c.tau_lo + (c.tau_hi - c.tau_lo) * mpq(rnd.randint(1, 99), 100)
        layer = angle_primitive(scene, RationalRotation.from_tau(tau))
        pairs = intersect_layer_segment(layer, slab)
        for li, si, q in pairs:
            assert not scene_collides(scene, q)
            assert layer.fscs[li].contains(q.position) == 1
            alpha = _alpha_on(c, q.position)
            assert slab_cell_of(slab, tau, alpha) == si
        # unreported pairs: no sampled alpha lies in both cells
        reported = {(li, si) for li, si, _ in pairs}
        for k in range(1, 200):
            alpha = mpq(k, 200)
            p = c.point(alpha)
            li = next((i for i, cell in enumerate(layer.fscs) if cell.contains(p) == 1), None)
            loc = slab.arrangement.locate((tau, alpha))
            if li is None or loc.kind != "face" or loc.face not in slab.fscs:
                continue
            assert (li, slab.fscs.index(loc.face)) in reported


def _alpha_on(c, p):
    d = c.direction
    return (p[0] - c.s[0]) / d[0] if d[0] else (p[1] - c.s[1]) / d[1]


def test_obstacle_features_include_box():
    edges, verts = obstacle_features(two_block_scene())
    assert len(edges) == 4 + 4 + 3 and len(verts) == 11
