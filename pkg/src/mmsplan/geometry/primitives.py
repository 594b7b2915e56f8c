"""Exact planar primitives over rational coordinates.

Points are plain ``(x, y)`` tuples of ``mpq``.  Polygons are lists of points
in counterclockwise order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from gmpy2 import mpq

from ..numeric import Q, sgn

Point = tuple


def pt(x, y) -> Point:
    return (Q(x), Q(y))


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Point, k) -> Point:
    return (a[0] * k, a[1] * k)


def cross(a: Point, b: Point):
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Point, b: Point):
    return a[0] * b[0] + a[1] * b[1]


def orient(a: Point, b: Point, c: Point) -> int:
    """+1 if a, b, c turn left, -1 if right, 0 if collinear."""
    return sgn((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def lerp(a: Point, b: Point, t) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def signed_area2(poly: Sequence[Point]):
    """Twice the signed area (positive for counterclockwise)."""
    s = 0
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


def bbox(poly: Sequence[Point]) -> tuple:
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    return min(xs), min(ys), max(xs), max(ys)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and o1 * o2 <= 0 and o3 * o4 <= 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def segment_params(p: Point, q: Point, a: Point, b: Point) -> list:
    """Parameters t in [0, 1] along pq where pq meets the closed segment ab.

    Collinear overlaps contribute the parameters of their two ends.
    """
    r = sub(q, p)
    s = sub(b, a)
    den = cross(r, s)
    ap = sub(a, p)
    if den != 0:
        t = cross(ap, s) / den
        u = cross(ap, r) / den
        if 0 <= t <= 1 and 0 <= u <= 1:
            return [t]
        return []
    if cross(ap, r) != 0:
        return []
    rr = dot(r, r)
    t0 = dot(ap, r) / rr
    t1 = dot(sub(b, p), r) / rr
    lo, hi = min(t0, t1), max(t0, t1)
    lo, hi = max(lo, mpq(0)), min(hi, mpq(1))
    if lo > hi:
        return []
    return [lo] if lo == hi else [lo, hi]


def point_in_polygon(p: Point, poly: Sequence[Point]) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (any orientation)."""
    x, y = p
    inside = False
    n = len(poly)
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        if (a[1] > y) != (b[1] > y):
            # x-coordinate of the crossing compared exactly
            lhs = (x - a[0]) * (b[1] - a[1])
            rhs = (b[0] - a[0]) * (y - a[1])
            if (b[1] - a[1]) > 0:
                if lhs < rhs:
                    inside = not inside
            else:
                if lhs > rhs:
                    inside = not inside
    return 1 if inside else -1


def is_simple(poly: Sequence[Point]) -> bool:
    n = len(poly)
    if n < 3:
        return False
    if len(set(poly)) != n:
        return False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            c, d = poly[j], poly[(j + 1) % n]
            if segments_intersect(a, b, c, d):
                return False
    # adjacent edges folding back onto each other
    for i in range(n):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % n]
        if orient(a, b, c) == 0 and dot(sub(a, b), sub(c, b)) > 0:
            return False
    return signed_area2(poly) != 0


def normalize_polygon(poly: Sequence[Point]) -> list:
    """Counterclockwise copy without repeated or collinear-consecutive vertices.

    Raises ValueError for non-simple input.
    """
    pts = []
    for p in poly:
        p = (Q(p[0]), Q(p[1]))
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if not is_simple(pts):
        raise ValueError("polygon is not simple")
    if signed_area2(pts) < 0:
        pts.reverse()
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            if orient(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts


# ---------------------------------------------------------------------------
# rotations and configurations


@dataclass(frozen=True)
class RationalRotation:
    """Rotation with rational sine and cosine.

    ``tau = tan(theta/2)``; it is ``None`` only for the half turn.
    """

    sin: mpq
    cos: mpq
    tau: Optional[mpq]

    @classmethod
    def from_tau(cls, tau) -> "RationalRotation":
        tau = Q(tau)
        d = 1 + tau * tau
        return cls(2 * tau / d, (1 - tau * tau) / d, tau)

    @classmethod
    def identity(cls) -> "RationalRotation":
        return cls(mpq(0), mpq(1), mpq(0))

    @classmethod
    def half_turn(cls) -> "RationalRotation":
        return cls(mpq(0), mpq(-1), None)

    @property
    def angle(self) -> float:
        """Angle in (-pi, pi]."""
        return math.atan2(float(self.sin), float(self.cos))

    def tau_in_chart(self, chart: str) -> Optional[mpq]:
        """Half-angle tangent in chart 'A' (about 0) or 'B' (about pi)."""
        if chart == "A":
            return self.tau
        if self.tau is None:
            return mpq(0)
        if self.tau == 0:
            return None
        return -1 / self.tau

    def apply(self, p: Point) -> Point:
        c, s = self.cos, self.sin
        return (c * p[0] - s * p[1], s * p[0] + c * p[1])

    def compose(self, other: "RationalRotation") -> "RationalRotation":
        s = self.sin * other.cos + self.cos * other.sin
        c = self.cos * other.cos - self.sin * other.sin
        return rotation_from_sincos(s, c)

    def check(self) -> bool:
        return self.sin * self.sin + self.cos * self.cos == 1


def rotation_from_sincos(s, c) -> RationalRotation:
    s, c = Q(s), Q(c)
    if s * s + c * c != 1:
        raise ValueError("sin^2 + cos^2 != 1")
    if c == -1:
        return RationalRotation.half_turn()
    return RationalRotation(s, c, s / (1 + c))


def rational_angle(theta, epsilon) -> RationalRotation:
    """Rational rotation within ``epsilon`` of ``theta`` (radians in (-pi, pi)).

    Continued-fraction approximation of tan(theta/2), so sine and cosine are
    rational and the Pythagorean identity holds exactly.
    """
    eps = mpmath.mpf(Fraction(Q(epsilon)).numerator) / Fraction(Q(epsilon)).denominator
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    with mpmath.workdps(40):
        th = mpmath.mpf(theta) if not isinstance(theta, (mpq, Fraction)) else (
            mpmath.mpf(int(Fraction(theta).numerator)) / int(Fraction(theta).denominator)
        )
        # the float nearest pi also counts as pi
        if not abs(th) < mpmath.pi - mpmath.mpf(1e-15):
            raise ValueError("theta must lie strictly inside (-pi, pi); use the other chart")
        target = mpmath.tan(th / 2)
        sign, man, exp, _ = mpmath.mpf(target)._mpf_
        frac = Fraction(-int(man) if sign else int(man)) * (Fraction(2) ** int(exp))
        limit = 1
        while True:
            cand = frac.limit_denominator(limit)
            err = abs(2 * mpmath.atan(mpmath.mpf(cand.numerator) / cand.denominator) - th)
            if err < eps:
                return RationalRotation.from_tau(mpq(cand))
            limit *= 4


def rotation_at(theta: float, epsilon=mpq(1, 10**9)) -> RationalRotation:
    """Rational rotation near ``theta`` with theta wrapped into (-pi, pi]."""
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-15:
        return RationalRotation.half_turn()
    return rational_angle(theta, epsilon)


@dataclass(frozen=True)
class Configuration:
    """Reference-point position and exact orientation."""

    position: Point
    rotation: RationalRotation

    @property
    def x(self):
        return self.position[0]

    @property
    def y(self):
        return self.position[1]

    def as_floats(self) -> tuple:
        return float(self.position[0]), float(self.position[1]), self.rotation.angle


def place(robot: Sequence[Point], q: Configuration) -> list:
    """Robot vertices under rotation then translation (exact)."""
    c, s = q.rotation.cos, q.rotation.sin
    px, py = q.position
    return [(c * x - s * y + px, s * x + c * y + py) for x, y in robot]


def place_tau(robot: Sequence[Point], tau, position: Point) -> list:
    """Same as :func:`place` but with the rotation given through tau."""
    tau = Q(tau)
    d = 1 + tau * tau
    out = []
    for x, y in robot:
        rx = ((1 - tau * tau) * x - 2 * tau * y) / d
        ry = (2 * tau * x + (1 - tau * tau) * y) / d
        out.append((rx + position[0], ry + position[1]))
    return out
