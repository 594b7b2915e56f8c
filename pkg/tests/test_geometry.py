import heapq
import math
import random

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from mmsplan.geometry import (
    Configuration,
    PolygonSet,
    RationalRotation,
    Scene,
    collides,
    minkowski_sum,
    normalize_polygon,
    place,
    pt,
    rational_angle,
    rotation_at,
    segment_inside,
    visibility_shortest_path,
)
from mmsplan.geometry.polygons import convex_decomposition, is_convex
from mmsplan.geometry.primitives import point_in_polygon, signed_area2
from mmsplan.geometry.segment_arrangement import SegmentArrangement, region_area2
from mmsplan.geometry.visibility import path_length, reflex_vertices
from oracles import interiors_overlap, orient, scene_collides
from helpers import random_star, square


# rotations


def test_rational_angle_zero_and_quarter():
    r = rational_angle(0.0, mpq(1, 10**6))
    assert (r.sin, r.cos, r.tau) == (0, 1, 0)
    r = rational_angle(math.pi / 2, mpq(1, 10**9))
    assert (r.sin, r.cos, r.tau) == (1, 0, 1)


def test_rational_angle_eighth_turn():
    r = rational_angle(math.pi / 4, mpq(1, 1000))
    with mpmath.workdps(50):
        err = abs(2 * mpmath.atan(mpmath.mpf(int(r.tau.numerator)) / int(r.tau.denominator)) - mpmath.pi / 4)
    assert err < mpmath.mpf(1) / 1000
    assert abs(float(r.tau) - 0.41421) < 0.01
    assert r.check()


def test_rational_angle_rejects_half_turn():
    with pytest.raises(ValueError):
        rational_angle(math.pi, mpq(1, 1000))
    assert rotation_at(math.pi).tau is None


@given(st.floats(-3.1, 3.1), st.integers(2, 12))
def test_rational_angle_accuracy(theta, digits):
    eps = mpq(1, 10**digits)
    r = rational_angle(theta, eps)
    assert r.check()
    assert r.sin == 2 * r.tau / (1 + r.tau**2)
    assert abs(r.angle - theta) < float(eps) + 1e-12


# placement


def test_place_examples():
    sq = square(0, 0, 1, 1)
    assert place(sq, Configuration((mpq(0), mpq(0)), RationalRotation.identity())) == sq
    moved = place(sq, Configuration((mpq(1), mpq(2)), RationalRotation.identity()))
    assert moved == [(x + 1, y + 2) for x, y in sq]
    quarter = place(sq, Configuration((mpq(0), mpq(0)), RationalRotation.from_tau(1)))
    assert quarter == [(-y, x) for x, y in sq]


@given(st.fractions(-5, 5, max_denominator=40))
def test_place_tau_and_sincos_forms_agree(tau):
    r1 = RationalRotation.from_tau(mpq(tau))
    from mmsplan.geometry import rotation_from_sincos

    r2 = rotation_from_sincos(r1.sin, r1.cos)
    robot = [pt(0, 0), pt(2, "1/3"), pt(-1, 1)]
    q = (mpq(3, 7), mpq(-2))
    assert place(robot, Configuration(q, r1)) == place(robot, Configuration(q, r2))


def test_normalize_rejects_bowtie():
    with pytest.raises(ValueError):
        normalize_polygon([pt(0, 0), pt(1, 1), pt(1, 0), pt(0, 1)])


def test_normalize_orients_and_drops_collinear():
    p = normalize_polygon([pt(0, 0), pt(0, 1), pt(1, 1), pt(2, 1), pt(2, 0)])
    assert signed_area2(p) > 0
    assert len(p) == 4


# convex decomposition and Minkowski sums


@given(st.integers(0, 10**6), st.integers(4, 9))
def test_convex_decomposition_covers_polygon(seed, n):
    poly = random_star(random.Random(seed), n)
    pieces = convex_decomposition(poly)
    assert all(is_convex(p) for p in pieces)
    assert sum(signed_area2(p) for p in pieces) == signed_area2(poly)


def test_minkowski_unit_squares():
    s = minkowski_sum(square(0, 0, 1, 1), square(0, 0, 1, 1))
    assert s.area() == 4
    assert s.contains(pt(2, 2)) == 0 and s.contains(pt(1, 1)) == 1 and s.contains(pt(3, 1)) == -1


def test_minkowski_with_point_translates():
    p = square(0, 0, 1, 1)
    s = minkowski_sum(p, [pt(2, 3)])
    assert s.regions[0][0] == [(x + 2, y + 3) for x, y in p]


def _closed_intersect(p, q):
    """Closed polygons meet: an edge pair meets or a vertex lies in the other."""
    def seg_meet(a, b, c, d):
        d1, d2, d3, d4 = orient(c, d, a), orient(c, d, b), orient(a, b, c), orient(a, b, d)
        if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
            return True
        def on(p_, q_, r_):
            return orient(p_, q_, r_) == 0 and min(p_[0], q_[0]) <= r_[0] <= max(p_[0], q_[0]) and min(p_[1], q_[1]) <= r_[1] <= max(p_[1], q_[1])
        return on(c, d, a) or on(c, d, b) or on(a, b, c) or on(a, b, d)

    for i in range(len(p)):
        for j in range(len(q)):
            if seg_meet(p[i], p[(i + 1) % len(p)], q[j], q[(j + 1) % len(q)]):
                return True
    return point_in_polygon(p[0], q) >= 0 or point_in_polygon(q[0], p) >= 0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_minkowski_grid_oracle(seed):
    rnd = random.Random(seed)
    hexagon = random_star(rnd, 6)
    quad = random_star(rnd, 4, r0=0.5, r1=1.5)
    s = minkowski_sum(hexagon, quad)
    n = 100
    for i in range(n):
        for j in range(n):
            p = (mpq(-50 + i, 10), mpq(-50 + j, 10))
            shifted = [(p[0] - x, p[1] - y) for x, y in hexagon]
            assert (s.contains(p) >= 0) == _closed_intersect(shifted, quad), p


@given(st.integers(0, 10**6))
def test_minkowski_commutes(seed):
    rnd = random.Random(seed)
    a = random_star(rnd, 5)
    b = random_star(rnd, 4, r0=0.5, r1=2)
    ab, ba = minkowski_sum(a, b), minkowski_sum(b, a)
    assert ab.area() == ba.area()
    for _ in range(200):
        p = (mpq(rnd.randint(-500, 500), 100), mpq(rnd.randint(-500, 500), 100))
        assert ab.contains(p) == ba.contains(p)


# collisions

BOX_SCENE = Scene((0, 0, 10, 10), square(-1, -1, 1, 1), [square(4, 4, 6, 6)])


def test_collides_examples():
    far = Configuration((mpq(2), mpq(2)), RationalRotation.identity())
    centered = Configuration((mpq(5), mpq(5)), RationalRotation.identity())
    touching = Configuration((mpq(3), mpq(5)), RationalRotation.identity())
    assert not collides(BOX_SCENE, far)
    assert collides(BOX_SCENE, centered)
    assert not collides(BOX_SCENE, touching)
    assert collides(BOX_SCENE, Configuration((mpq(1, 2), mpq(5)), RationalRotation.identity()))


def test_collides_matches_oracle_on_random_scenes():
    rnd = random.Random(7)
    for k in range(4):
        robot = random_star(rnd, 5, r0=0.3, r1=1.2)
        obstacles = [random_star(rnd, rnd.randint(3, 6), cx=rnd.uniform(2, 8), cy=rnd.uniform(2, 8), r0=0.5, r1=1.5) for _ in range(3)]
        scene = Scene((0, 0, 10, 10), robot, obstacles)
        for _ in range(250):
            q = Configuration(
                (mpq(rnd.randint(0, 1000), 100), mpq(rnd.randint(0, 1000), 100)),
                RationalRotation.from_tau(mpq(rnd.randint(-300, 300), 100)),
            )
            assert collides(scene, q) == scene_collides(scene, q)


def test_interiors_oracle_touching():
    a = [(0, 0), (1, 0), (1, 1), (0, 1)]
    b = [(1, 0), (2, 0), (2, 1), (1, 1)]
    assert not interiors_overlap(a, b)
    assert interiors_overlap(a, a)


# visibility paths


def test_convex_region_straight():
    reg = (square(0, 0, 4, 4), [])
    assert visibility_shortest_path(reg, pt(1, 1), pt(3, 2)) == [pt(1, 1), pt(3, 2)]


def test_l_shape_bends_once():
    outer = [pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)]
    path = visibility_shortest_path((outer, []), pt("7/4", "1/2"), pt("1/2", "7/4"))
    assert path == [pt("7/4", "1/2"), pt(1, 1), pt("1/2", "7/4")]


def test_disconnected_region():
    ps = PolygonSet([(square(0, 0, 1, 1), []), (square(2, 0, 3, 1), [])])
    with pytest.raises(ValueError, match="disconnected"):
        visibility_shortest_path(ps, pt("1/2", "1/2"), pt("5/2", "1/2"))


def _grid_shortest(outer, hole, a, b, h=0.25, reach=4):
    """Any-angle grid Dijkstra; segments tested against the open hole square."""
    (hx0, hy0), (hx1, hy1) = hole
    def blocked(p, q):
        # Liang-Barsky against the open square
        t0, t1 = 0.0, 1.0
        dx, dy = q[0] - p[0], q[1] - p[1]
        for pp, qq in ((-dx, p[0] - hx0), (dx, hx1 - p[0]), (-dy, p[1] - hy0), (dy, hy1 - p[1])):
            if pp == 0:
                if qq <= 0:
                    return False
            else:
                r = qq / pp
                if pp < 0:
                    t0 = max(t0, r)
                else:
                    t1 = min(t1, r)
        return t1 - t0 > 1e-12
    n = int(10 / h) + 1
    start = (round(a[0] / h), round(a[1] / h))
    goal = (round(b[0] / h), round(b[1] / h))
    offs = [(i, j) for i in range(-reach, reach + 1) for j in range(-reach, reach + 1) if (i, j) != (0, 0) and math.gcd(abs(i), abs(j)) == 1]
    dist = {start: 0.0}
    heap = [(0.0, start)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == goal:
            return d
        if d > dist[u]:
            continue
        for di, dj in offs:
            v = (u[0] + di, u[1] + dj)
            if not (0 <= v[0] < n and 0 <= v[1] < n):
                continue
            if blocked((u[0] * h, u[1] * h), (v[0] * h, v[1] * h)):
                continue
            nd = d + h * math.hypot(di, dj)
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return math.inf


def test_hole_path_matches_grid_oracle():
    outer = square(0, 0, 10, 10)
    hole = list(reversed(square(3, 4, 6, 7)))
    a, b = pt(1, 5), pt(9, 6)
    path = visibility_shortest_path((outer, [hole]), a, b)
    for v in path[1:-1]:
        assert v in hole
    for p, q in zip(path, path[1:]):
        assert segment_inside(p, q, outer, [hole])
    ref = _grid_shortest(outer, ((3, 4), (6, 7)), (1, 5), (9, 6))
    assert abs(path_length(path) - ref) <= 0.01 * ref


def test_reflex_vertices_of_l_shape():
    outer = [pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)]
    assert reflex_vertices(outer, []) == [pt(1, 1)]


# segment arrangement


def test_overlapping_squares_union():
    segs = []
    for sq in (square(0, 0, 2, 2), square(1, 1, 3, 3)):
        segs += [(sq[i], sq[(i + 1) % 4]) for i in range(4)]
    arr = SegmentArrangement(segs)
    sel = [any(point_in_polygon(arr.face_sample_point(f), sq) == 1 for sq in (square(0, 0, 2, 2), square(1, 1, 3, 3))) for f in range(arr.num_faces)]
    regions = arr.regions(sel)
    assert len(regions) == 1
    assert region_area2(regions[0][0], regions[0][1]) == 14
