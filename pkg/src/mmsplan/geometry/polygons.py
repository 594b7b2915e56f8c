"""Convex decomposition, Minkowski sums and exact collision tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .primitives import (
    Configuration,
    Point,
    cross,
    orient,
    place,
    point_in_polygon,
    signed_area2,
    sub,
)
from .segment_arrangement import SegmentArrangement, faces_where, region_area2, region_contains


@dataclass
class PolygonSet:
    """Union of polygonal regions, each an outer ring plus hole rings."""

    regions: list = field(default_factory=list)

    def contains(self, p: Point) -> int:
        """+1 interior, 0 boundary, -1 outside."""
        best = -1
        for outer, holes in self.regions:
            r = region_contains(outer, holes, p)
            if r == 1:
                return 1
            best = max(best, r)
        return best

    def area(self) -> mpq:
        return sum((region_area2(o, h) for o, h in self.regions), mpq(0)) / 2

    def __len__(self) -> int:
        return len(self.regions)


def convex_hull(points: Sequence[Point]) -> list:
    """Counterclockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and orient(h[-2], h[-1], p) <= 0:
                h.pop()
            h.append(p)
        return h

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def is_convex(poly: Sequence[Point]) -> bool:
    n = len(poly)
    return all(orient(poly[i - 1], poly[i], poly[(i + 1) % n]) >= 0 for i in range(n))


def triangulate(poly: Sequence[Point]) -> list:
    """Ear clipping of a simple counterclockwise polygon."""
    idx = list(range(len(poly)))
    tris = []
    guard = 0
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            a, b, c = poly[idx[k - 1]], poly[idx[k]], poly[idx[(k + 1) % n]]
            if orient(a, b, c) <= 0:
                continue
            tri = (a, b, c)
            blocked = False
            for j in idx:
                p = poly[j]
                if p in tri:
                    continue
                if point_in_polygon(p, tri) >= 0:
                    blocked = True
                    break
            if not blocked:
                tris.append([a, b, c])
                del idx[k]
                break
        else:
            # only collinear corners left; drop one
            for k in range(n):
                if orient(poly[idx[k - 1]], poly[idx[k]], poly[idx[(k + 1) % n]]) == 0:
                    del idx[k]
                    break
            else:
                raise ValueError("triangulation failed; polygon not simple")
        guard += 1
        if guard > 4 * len(poly) ** 2:
            raise ValueError("triangulation did not terminate")
    a, b, c = (poly[i] for i in idx)
    if orient(a, b, c) > 0:
        tris.append([a, b, c])
    return tris


def _merge(p: list, q: list, u: Point, v: Point):
    """Glue p and q along the shared edge u->v of p (v->u of q)."""
    i = p.index(u)
    p_rot = p[i + 1 :] + p[: i + 1]  # starts at v, ends at u
    j = q.index(v)
    q_rot = q[j + 1 :] + q[: j + 1]  # starts at u, ends at v
    return p_rot[:-1] + q_rot[:-1]


def convex_decomposition(poly: Sequence[Point]) -> list:
    """Convex pieces of a simple counterclockwise polygon.

    Triangulates, then greedily removes diagonals whose removal keeps the
    merged piece convex.
    """
    poly = list(poly)
    if is_convex(poly):
        return [poly]
    pieces = triangulate(poly)
    merged = True
    while merged:
        merged = False
        for i in range(len(pieces)):
            p = pieces[i]
            for k in range(len(p)):
                u, v = p[k], p[(k + 1) % len(p)]
                for j in range(len(pieces)):
                    if j == i:
                        continue
                    q = pieces[j]
                    if v in q and u in q:
                        jv = q.index(v)
                        if q[(jv + 1) % len(q)] != u:
                            continue
                        cand = _merge(p, q, u, v)
                        cand = [c for n_, c in enumerate(cand) if orient(cand[n_ - 1], c, cand[(n_ + 1) % len(cand)]) != 0]
                        if is_convex(cand):
                            pieces[i] = cand
                            del pieces[j]
                            merged = True
                            break
                if merged:
                    break
            if merged:
                break
    return pieces


def convex_sum(p: Sequence[Point], q: Sequence[Point]) -> list:
    return convex_hull([(a[0] + b[0], a[1] + b[1]) for a in p for b in q])


def clip_convex(poly: Sequence[Point], xmin, ymin, xmax, ymax) -> list:
    """Sutherland-Hodgman clip of a convex polygon to an axis box."""
    pts = list(poly)
    for axis, bound, keep_le in ((0, xmin, False), (0, xmax, True), (1, ymin, False), (1, ymax, True)):
        if not pts:
            break

        def inside(p):
            return p[axis] <= bound if keep_le else p[axis] >= bound

        out = []
        n = len(pts)
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            ia, ib = inside(a), inside(b)
            if ia:
                out.append(a)
            if ia != ib:
                t = (bound - a[axis]) / (b[axis] - a[axis])
                x = (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)
                if axis == 0:
                    x = (bound, x[1])
                else:
                    x = (x[0], bound)
                out.append(x)
        pts = out
    return convex_hull(pts)


def union_of_convex(pieces: Sequence[Sequence[Point]]) -> PolygonSet:
    pieces = [p for p in pieces if len(p) >= 3 and signed_area2(p) > 0]
    segs = []
    for p in pieces:
        segs.extend((p[i], p[(i + 1) % len(p)]) for i in range(len(p)))
    arr = SegmentArrangement(segs)
    sel = faces_where(arr, lambda x: any(point_in_polygon(x, p) == 1 for p in pieces))
    return PolygonSet([(o, h) for o, h, _ in arr.regions(sel)])


def minkowski_sum(p: Sequence[Point], q: Sequence[Point]) -> PolygonSet:
    """Exact sum of two simple polygons as a union of convex-piece sums.

    A single point or a segment is accepted for either operand.
    """
    if len(p) < 3 or len(q) < 3:
        if len(p) < 3:
            p, q = q, p
        if len(q) == 1:
            d = q[0]
            return PolygonSet([([(a[0] + d[0], a[1] + d[1]) for a in p], [])])
        return union_of_convex([convex_sum(a, q) for a in convex_decomposition(p)])
    dp = convex_decomposition(p)
    dq = convex_decomposition(q)
    return union_of_convex([convex_sum(a, b) for a in dp for b in dq])


def _separated(p: Sequence[Point], q: Sequence[Point]) -> bool:
    """Some edge line of p or q weakly separates the two convex polygons."""
    for a_poly, b_poly in ((p, q), (q, p)):
        n = len(a_poly)
        for i in range(n):
            a, b = a_poly[i], a_poly[(i + 1) % n]
            e = sub(b, a)
            if all(cross(e, sub(x, a)) <= 0 for x in b_poly):
                return True
    return False


def convex_interiors_overlap(p: Sequence[Point], q: Sequence[Point]) -> bool:
    return not _separated(p, q)


def collides(scene, q: Configuration) -> bool:
    """True when the placed robot leaves the workspace or overlaps an obstacle interior.

    Boundary contact is free.
    """
    placed = place(scene.robot, q)
    xmin, ymin, xmax, ymax = scene.workspace
    if any(not (xmin <= x <= xmax and ymin <= y <= ymax) for x, y in placed):
        return True
    pieces = [place(piece, q) for piece in scene.robot_pieces]
    bx = (min(p[0] for p in placed), max(p[0] for p in placed))
    by = (min(p[1] for p in placed), max(p[1] for p in placed))
    for ob, (ox0, oy0, ox1, oy1) in zip(scene.obstacle_pieces, scene.obstacle_piece_boxes):
        if ox0 >= bx[1] or ox1 <= bx[0] or oy0 >= by[1] or oy1 <= by[0]:
            continue
        for rp in pieces:
            if not _separated(rp, ob):
                return True
    return False
