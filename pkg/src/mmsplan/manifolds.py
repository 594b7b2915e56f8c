"""Layers (fixed orientation) and slabs (reference point on a fixed segment).

A slab configuration is ``(tau, alpha)``: the reference point sits at
``s + alpha (t - s)`` and the orientation is ``2 atan(tau)`` in chart A or
``pi + 2 atan(tau)`` in chart B, where chart B works with the robot turned
by a half turn.  Every contact between robot and obstacle boundaries is a
rational function alpha(tau); their arrangement splits the slab into cells
that are entirely free or entirely forbidden.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import count
from typing import Optional, Sequence

from gmpy2 import mpq

from .arrangement import Arrangement, Box
from .curves import RationalFunction, XMonotoneArc
from .geometry.polygons import clip_convex, collides, convex_sum
from .geometry.primitives import (
    Configuration,
    Point,
    RationalRotation,
    point_in_polygon,
    segment_params,
    segments_intersect,
    signed_area2,
)
from .geometry.segment_arrangement import SegmentArrangement, region_area2, region_contains
from .numeric import (
    Q,
    compare,
    degree,
    from_rationals,
    isolate_real_roots,
    peval,
    pgcd,
    psub,
    rational_between,
    simplest_between,
    strip,
)

_ids = count()


# ---------------------------------------------------------------------------
# constraints and charts


@dataclass(frozen=True)
class AngleConstraint:
    rotation: RationalRotation


@dataclass(frozen=True)
class SegmentConstraint:
    """Reference point on segment s-t, orientation inside the open RoI.

    ``tau_lo`` and ``tau_hi`` bound the RoI in the chart's half-angle
    tangent.
    """

    s: Point
    t: Point
    tau_lo: mpq
    tau_hi: mpq
    chart: str = "A"

    def __post_init__(self):
        if self.s == self.t:
            raise ValueError("degenerate segment")
        if not self.tau_lo < self.tau_hi:
            raise ValueError("empty RoI")
        if self.chart not in ("A", "B"):
            raise ValueError("chart must be 'A' or 'B'")

    @property
    def direction(self) -> Point:
        return (self.t[0] - self.s[0], self.t[1] - self.s[1])

    def point(self, alpha) -> Point:
        d = self.direction
        return (self.s[0] + alpha * d[0], self.s[1] + alpha * d[1])

    def rotation(self, tau) -> RationalRotation:
        return chart_rotation(tau, self.chart)

    def configuration(self, tau, alpha) -> Configuration:
        return Configuration(self.point(Q(alpha)), self.rotation(Q(tau)))

    def contains_rotation(self, rot: RationalRotation) -> bool:
        tau = rot.tau_in_chart(self.chart)
        return tau is not None and self.tau_lo < tau < self.tau_hi

    def angle_range(self) -> tuple:
        base = 0.0 if self.chart == "A" else math.pi
        return base + 2 * math.atan(float(self.tau_lo)), base + 2 * math.atan(float(self.tau_hi))


def chart_rotation(tau, chart: str) -> RationalRotation:
    r = RationalRotation.from_tau(tau)
    if chart == "A":
        return r
    if Q(tau) == 0:
        return RationalRotation.half_turn()
    return RationalRotation(-r.sin, -r.cos, -1 / Q(tau))


def chart_robot(robot: Sequence[Point], chart: str) -> list:
    if chart == "A":
        return list(robot)
    return [(-x, -y) for x, y in robot]


def segment_constraint_around(s: Point, t: Point, theta_c: float, half_width: float, eps=mpq(1, 10**4)) -> SegmentConstraint:
    """RoI (theta_c - w, theta_c + w) in the chart that keeps it away from tau = infinity."""
    theta_c = math.remainder(theta_c, 2 * math.pi)
    w = min(half_width, 0.49 * math.pi)
    chart = "A" if abs(theta_c) <= math.pi / 2 else "B"
    c = theta_c if chart == "A" else math.remainder(theta_c - math.pi, 2 * math.pi)
    lo = _tau_near(math.tan((c - w) / 2), eps)
    hi = _tau_near(math.tan((c + w) / 2), eps)
    return SegmentConstraint(s, t, lo, hi, chart)


def _tau_near(v: float, eps) -> mpq:
    return mpq(Fraction(v).limit_denominator(int(1 / eps)))


# ---------------------------------------------------------------------------
# critical curves


@dataclass(frozen=True)
class Degenerate:
    """Contact that does not depend on alpha: vertical lines at ``roots``."""

    roots: tuple
    source: tuple


@dataclass
class CriticalCurve:
    alpha: RationalFunction
    source: tuple
    contact: tuple  # (numerator, denominator) of the contact parameter along the finite edge
    walls: tuple = ()
    validity: list = field(default_factory=list)


def _qpoly(coeffs) -> tuple:
    """Rational coefficient list (low degree first) with trailing zeros removed."""
    out = [Q(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _int_pair(num, den) -> tuple:
    """Integer polynomials proportional (jointly) to rational num/den."""
    num, den = list(num), list(den)
    both = from_rationals(num + den)
    both = tuple(both) + (0,) * (len(num) + len(den) - len(both))
    return strip(both[: len(num)]), strip(both[len(num) :])


def vertex_edge_curve(v: Point, line: tuple, s: Point, t: Point):
    """alpha(tau) at which the robot vertex v touches the line a x + b y + c = 0."""
    a, b, c = (Q(z) for z in line)
    xi, yi = v
    xs, ys = s
    xt, yt = t
    p2 = a * (xi - xs) + b * (yi - ys) - c
    p1 = 2 * (a * yi - b * xi)
    p0 = -a * (xi + xs) - b * (yi + ys) - c
    q = a * (xt - xs) + b * (yt - ys)
    num, den = _int_pair(_qpoly([p0, p1, p2]), _qpoly([q, 0, q]))
    if not den:
        roots = tuple(x for x, _ in isolate_real_roots(num)) if num else ()
        return Degenerate(roots, ("vertex-edge", v, line))
    return RationalFunction(num, den)


def edge_vertex_curve(v1: Point, v2: Point, v0: Point, s: Point, t: Point):
    """alpha(tau) at which obstacle vertex v0 lies on the line of robot edge v1-v2.

    Returns ``(curve, walls)``: common real roots of numerator and
    denominator are orientations where the contact holds for every alpha.
    """
    dx, dy = v2[0] - v1[0], v2[1] - v1[1]
    k = v1[0] * v2[1] - v2[0] * v1[1]
    x0, y0 = v0
    xs, ys = s
    xt, yt = t
    m2 = dy * (x0 - xs) - dx * (y0 - ys) + k
    m1 = -2 * dx * (x0 - xs) - 2 * dy * (y0 - ys)
    m0 = -m2 + 2 * k
    n2 = dy * (xt - xs) - dx * (yt - ys)
    n1 = -2 * dx * (xt - xs) - 2 * dy * (yt - ys)
    n0 = -n2
    num, den = _int_pair(_qpoly([m0, m1, m2]), _qpoly([n0, n1, n2]))
    if not den:
        roots = tuple(x for x, _ in isolate_real_roots(num)) if num else ()
        return Degenerate(roots, ("edge-vertex", v1, v2, v0)), ()
    walls = ()
    if num:
        g = pgcd(num, den)
        if degree(g) > 0:
            walls = tuple(x for x, _ in isolate_real_roots(g))
    return RationalFunction(num, den), walls


def _rot_num(v: Point) -> tuple:
    """(1 + tau^2) * M(tau) v as two quadratic polynomials in tau."""
    x, y = v
    return (_qpoly([x, -2 * y, -x]), _qpoly([y, 2 * x, -y]))


def _rot_num_T(v) -> tuple:
    """(1 + tau^2) * M(tau)^T v for v given as polynomials (vx, vy)."""
    vx, vy = v
    one_m = (1, 0, -1)
    two_t = (0, 2)
    return (
        _qadd(_qmul(one_m, vx), _qmul(two_t, vy)),
        _qsub(_qmul(one_m, vy), _qmul(two_t, vx)),
    )


def _qmul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [mpq(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _qpoly(out)


def _qadd(p, q) -> tuple:
    n = max(len(p), len(q))
    return _qpoly([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _qsub(p, q) -> tuple:
    return _qadd(p, tuple(-c for c in q))


def _qscale(p, k) -> tuple:
    return _qpoly([c * k for c in p])


def vertex_edge_contact(v: Point, e1: Point, e2: Point, s: Point, t: Point, f: RationalFunction) -> tuple:
    """Parameter along e1->e2 of the touching point, as (num, den) in tau."""
    rx, ry = _rot_num(v)
    one_p = (1, 0, 1)
    an, ad = f.num, f.den
    dx, dy = t[0] - s[0], t[1] - s[1]
    # position = [rx*ad + (1+tau^2)(s*ad + d*an)] / ((1+tau^2) ad)
    D = _qmul(one_p, ad)
    px = _qadd(_qmul(rx, ad), _qmul(one_p, _qadd(_qscale(ad, s[0]), _qscale(an, dx))))
    py = _qadd(_qmul(ry, ad), _qmul(one_p, _qadd(_qscale(ad, s[1]), _qscale(an, dy))))
    ex, ey = e2[0] - e1[0], e2[1] - e1[1]
    un = _qadd(_qscale(_qsub(px, _qscale(D, e1[0])), ex), _qscale(_qsub(py, _qscale(D, e1[1])), ey))
    ud = _qscale(D, ex * ex + ey * ey)
    return _int_pair(un, ud)


def edge_vertex_contact(v1: Point, v2: Point, v0: Point, s: Point, t: Point, f: RationalFunction) -> tuple:
    """Parameter along the robot edge v1->v2 where it touches v0, as (num, den)."""
    an, ad = f.num, f.den
    dx, dy = t[0] - s[0], t[1] - s[1]
    # Z = v0 - s - alpha d, scaled by ad
    zx = _qsub(_qscale(ad, v0[0] - s[0]), _qscale(an, dx))
    zy = _qsub(_qscale(ad, v0[1] - s[1]), _qscale(an, dy))
    wx, wy = _rot_num_T((zx, zy))  # (1+tau^2) ad M^T Z
    D = _qmul((1, 0, 1), ad)
    ex, ey = v2[0] - v1[0], v2[1] - v1[1]
    un = _qadd(_qscale(_qsub(wx, _qscale(D, v1[0])), ex), _qscale(_qsub(wy, _qscale(D, v1[1])), ey))
    ud = _qscale(D, ex * ex + ey * ey)
    return _int_pair(un, ud)


def _between01(num, den, x) -> bool:
    n = peval(num, x)
    d = peval(den, x)
    if d == 0:
        return False
    v = mpq(n) / d
    return 0 <= v <= 1


def clip_validity(curve: CriticalCurve, tau_lo, tau_hi) -> list:
    """tau-intervals inside (tau_lo, tau_hi) where alpha is in [0, 1] and the
    contact lies on the finite edge.  Endpoints are exact roots."""
    f = curve.alpha
    un, ud = curve.contact
    polys = [f.num, psub(f.num, f.den), f.den, un, psub(un, ud), ud]
    cuts = [Q(tau_lo), Q(tau_hi)]
    for p in polys:
        if degree(p) > 0:
            for x, _ in isolate_real_roots(p):
                if compare(x, tau_lo) > 0 and compare(x, tau_hi) < 0:
                    cuts.append(x.lo if x.is_rational else x)
    cuts.sort(key=cmp_to_key(compare))
    uniq = []
    for c in cuts:
        if not uniq or compare(uniq[-1], c) != 0:
            uniq.append(c)
    out = []
    for a, b in zip(uniq, uniq[1:]):
        x = rational_between(a, b)
        if _between01(f.num, f.den, x) and _between01(un, ud, x):
            if out and out[-1][1] is a:
                out[-1] = (out[-1][0], b)
            else:
                out.append((a, b))
    curve.validity = out
    return out


# ---------------------------------------------------------------------------
# manifolds


@dataclass
class LayerCell:
    outer: list
    holes: list
    area: mpq
    index: int = 0
    sample: Optional[Point] = None

    def contains(self, p: Point) -> int:
        return region_contains(self.outer, self.holes, p)


@dataclass
class Manifold:
    kind: str  # "layer" or "slab"
    constraint: object
    fscs: list
    id: int = field(default_factory=lambda: next(_ids))
    arrangement: Optional[Arrangement] = None
    sizes: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def rotation(self) -> RationalRotation:
        return self.constraint.rotation


def _shrunk_box(scene, placed_robot: Sequence[Point]):
    xmin, ymin, xmax, ymax = scene.workspace
    rx = [p[0] for p in placed_robot]
    ry = [p[1] for p in placed_robot]
    return xmin - min(rx), ymin - min(ry), xmax - max(rx), ymax - max(ry)


def angle_primitive(scene, c) -> Manifold:
    """Free reference-point regions at a fixed orientation."""
    rot = c.rotation if isinstance(c, AngleConstraint) else c
    c = AngleConstraint(rot)
    placed = [rot.apply(v) for v in scene.robot]
    bx0, by0, bx1, by1 = _shrunk_box(scene, placed)
    if not (bx0 < bx1 and by0 < by1):
        return Manifold("layer", c, [], sizes=[])
    neg_pieces = [[(-x, -y) for x, y in (rot.apply(v) for v in piece)] for piece in scene.robot_pieces]
    forb = []
    for ob in scene.obstacle_pieces:
        for rp in neg_pieces:
            s = convex_sum(rp, ob)
            if len(s) < 3:
                continue
            xs = [p[0] for p in s]
            ys = [p[1] for p in s]
            if max(xs) <= bx0 or min(xs) >= bx1 or max(ys) <= by0 or min(ys) >= by1:
                continue
            cl = clip_convex(s, bx0, by0, bx1, by1)
            if len(cl) >= 3 and signed_area2(cl) > 0:
                forb.append(cl)
    corners = [(bx0, by0), (bx1, by0), (bx1, by1), (bx0, by1)]
    segs = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    for p in forb:
        segs.extend((p[i], p[(i + 1) % len(p)]) for i in range(len(p)))
    arr = SegmentArrangement(segs)
    sel = []
    samples = []
    for f in range(arr.num_faces):
        x = arr.face_sample_point(f)
        samples.append(x)
        sel.append(not any(point_in_polygon(x, p) == 1 for p in forb))
    cells = []
    area = (scene.workspace[2] - scene.workspace[0]) * (scene.workspace[3] - scene.workspace[1])
    for outer, holes, faces in arr.regions(sel):
        a = region_area2(outer, holes) / 2
        cells.append(LayerCell(outer, holes, a, len(cells), samples[faces[0]]))
    m = Manifold("layer", c, cells)
    m.sizes = [float(cell.area / area) for cell in cells]
    m.stats = {"forbidden_pieces": len(forb)}
    return m


def _feature_reach(seg_s, seg_t, p, q) -> float:
    """Float distance between segments s-t and p-q."""
    def pd(a, b, c):
        ax, ay = float(a[0]), float(a[1])
        bx, by = float(b[0]), float(b[1])
        cx, cy = float(c[0]), float(c[1])
        dx, dy = cx - bx, cy - by
        L = dx * dx + dy * dy
        u = 0.0 if L == 0 else max(0.0, min(1.0, ((ax - bx) * dx + (ay - by) * dy) / L))
        return math.hypot(ax - bx - u * dx, ay - by - u * dy)

    if p != q and segments_intersect(seg_s, seg_t, p, q):
        return 0.0
    return min(pd(seg_s, p, q), pd(seg_t, p, q), pd(p, seg_s, seg_t), pd(q, seg_s, seg_t))


def obstacle_features(scene) -> tuple:
    """(edges, vertices) of obstacles plus the workspace box."""
    edges = list(scene.workspace_edges)
    verts = [e[0] for e in scene.workspace_edges]
    for o in scene.obstacles:
        n = len(o)
        edges.extend((o[i], o[(i + 1) % n]) for i in range(n))
        verts.extend(o)
    return edges, verts


def critical_curves(scene, c: SegmentConstraint) -> tuple:
    """Clipped critical curves and wall orientations of a slab."""
    robot = chart_robot(scene.robot, c.chart)
    edges, verts = obstacle_features(scene)
    s, t = c.s, c.t
    curves: list = []
    walls: list = []
    slack = 1e-7
    n = len(robot)
    radius = [math.hypot(float(x), float(y)) for x, y in robot]
    for i, v in enumerate(robot):
        for e1, e2 in edges:
            if _feature_reach(s, t, e1, e2) > radius[i] + slack:
                continue
            line = (e2[1] - e1[1], -(e2[0] - e1[0]), e2[0] * e1[1] - e1[0] * e2[1])
            f = vertex_edge_curve(v, line, s, t)
            if isinstance(f, Degenerate):
                walls.extend(f.roots)
                continue
            if f.num == () or f.is_constant and not (0 < f.constant_value < 1):
                continue
            cc = CriticalCurve(f, ("vertex-edge", i, (e1, e2)), vertex_edge_contact(v, e1, e2, s, t, f))
            if clip_validity(cc, c.tau_lo, c.tau_hi):
                curves.append(cc)
    for i in range(n):
        v1, v2 = robot[i], robot[(i + 1) % n]
        reach = max(radius[i], radius[(i + 1) % n])
        for v0 in verts:
            if _feature_reach(s, t, v0, v0) > reach + slack:
                continue
            f, w = edge_vertex_curve(v1, v2, v0, s, t)
            if isinstance(f, Degenerate):
                walls.extend(f.roots)
                continue
            walls.extend(w)
            if f.num == () or f.is_constant and not (0 < f.constant_value < 1):
                continue
            cc = CriticalCurve(f, ("edge-vertex", i, v0), edge_vertex_contact(v1, v2, v0, s, t, f))
            if clip_validity(cc, c.tau_lo, c.tau_hi):
                curves.append(cc)
    walls = [w for w in walls if compare(w, c.tau_lo) > 0 and compare(w, c.tau_hi) < 0]
    return curves, walls


def segment_primitive(scene, c: SegmentConstraint) -> Manifold:
    """Free cells of the slab, found on the arrangement of its critical curves."""
    curves, walls = critical_curves(scene, c)
    arcs = [XMonotoneArc(cc.alpha, lo, hi) for cc in curves for lo, hi in cc.validity]
    box = Box(c.tau_lo, c.tau_hi, mpq(0), mpq(1))
    arr = Arrangement(arcs, box, walls)
    free = []
    sizes = []
    barea = float((c.tau_hi - c.tau_lo))
    for f in range(arr.num_bounded_faces):
        tau, alpha = arr.face_sample_point(f)
        ok = not collides(scene, c.configuration(tau, alpha))
        arr.classification[f] = ok
        if ok:
            free.append(f)
            sizes.append(_face_area(arr, f) / barea)
    m = Manifold("slab", c, free, arrangement=arr, sizes=sizes)
    m.stats = {
        "curves": len(curves),
        "arcs": len(arcs),
        "walls": len(walls),
        "V": arr.num_vertices,
        "E": arr.num_edges,
        "F": arr.num_faces,
    }
    return m


def _face_area(arr: Arrangement, f: int) -> float:
    """Float area of a face by Simpson's rule on each trapezoid."""
    total = 0.0
    for t in arr.face_traps[f]:
        k, _ = arr.trap_slab(t)
        a, b = float(arr.events[k]), float(arr.events[k + 1])
        lo, hi = arr.trap_bounds(t)
        xs = [a + (b - a) * i / 4 for i in range(5)]
        inner = [mpq(x) for x in xs[1:-1]]
        hs = []
        for x in inner:
            hs.append(float(arr.bound_value(hi, x) - arr.bound_value(lo, x)))
        # open-ended Newton-Cotes on three interior points
        total += (b - a) * (2 * hs[0] - hs[1] + 2 * hs[2]) / 3
    return max(total, 0.0)


# ---------------------------------------------------------------------------
# layer / slab intersection


def segment_alpha_intervals(cell: LayerCell, s: Point, t: Point) -> list:
    """Maximal open alpha-intervals where s + alpha (t - s) is interior to the cell."""
    ts = {mpq(0), mpq(1)}
    for ring in [cell.outer] + list(cell.holes):
        n = len(ring)
        for i in range(n):
            ts.update(segment_params(s, t, ring[i], ring[(i + 1) % n]))
    ts = sorted(ts)
    out = []
    for a, b in zip(ts, ts[1:]):
        m = (a + b) / 2
        p = (s[0] + (t[0] - s[0]) * m, s[1] + (t[1] - s[1]) * m)
        if cell.contains(p) == 1:
            if out and out[-1][1] == a:
                out[-1] = (out[-1][0], b)
            else:
                out.append((a, b))
    return out


def intersect_layer_segment(layer: Manifold, slab: Manifold) -> list:
    """Pairs (layer cell, slab cell, witness configuration) sharing a free configuration."""
    c = slab.constraint
    rot = layer.rotation
    if not c.contains_rotation(rot):
        return []
    tau = rot.tau_in_chart(c.chart)
    fiber = slab.arrangement.vertical_fiber(tau, allow_events=True)
    free = set(slab.fscs)
    pos = {f: i for i, f in enumerate(slab.fscs)}
    out = []
    for li, cell in enumerate(layer.fscs):
        for a0, a1 in segment_alpha_intervals(cell, c.s, c.t):
            for face, (y0, y1) in fiber:
                if face is None or face not in free:
                    continue
                lo, hi = max(a0, y0), min(a1, y1)
                if lo < hi:
                    alpha = simplest_between(lo, hi)
                    q = Configuration(c.point(alpha), rot)
                    out.append((li, pos[face], q))
    return out


def slab_cell_of(slab: Manifold, tau, alpha) -> Optional[int]:
    loc = slab.arrangement.locate((tau, alpha))
    if loc.kind != "face" or loc.face not in slab.fscs:
        return None
    return slab.fscs.index(loc.face)
