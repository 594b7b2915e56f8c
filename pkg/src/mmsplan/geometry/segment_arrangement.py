"""Exact arrangement of line segments as a half-edge structure.

Built once from a segment soup; faces come out of the ``next`` cycles and
holes are attached to the smallest enclosing outer cycle.  Regions are
maximal unions of faces sharing a predicate, walked out as boundary cycles.
"""
from __future__ import annotations

from functools import cmp_to_key
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from ..numeric import sgn
from .primitives import (
    Point,
    cross,
    dot,
    point_in_polygon,
    signed_area2,
    sub,
)

UNBOUNDED = -1


def _half(d) -> int:
    return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    return -sgn(cross(a, b))


def _split_points(segs: Sequence[tuple]) -> list:
    """For each segment, the set of points where it must be cut."""
    n = len(segs)
    cuts = [{s[0], s[1]} for s in segs]
    if n < 2:
        return cuts
    box = np.array(
        [
            [
                float(min(a[0], b[0])),
                float(min(a[1], b[1])),
                float(max(a[0], b[0])),
                float(max(a[1], b[1])),
            ]
            for a, b in segs
        ]
    )
    pad = 1e-9 * (1.0 + np.abs(box).max())
    box[:, :2] -= pad
    box[:, 2:] += pad
    for i in range(n - 1):
        rest = box[i + 1 :]
        hit = (
            (rest[:, 0] <= box[i, 2])
            & (rest[:, 2] >= box[i, 0])
            & (rest[:, 1] <= box[i, 3])
            & (rest[:, 3] >= box[i, 1])
        )
        p, q = segs[i]
        r = sub(q, p)
        for k in np.nonzero(hit)[0]:
            j = i + 1 + int(k)
            a, b = segs[j]
            s = sub(b, a)
            den = cross(r, s)
            ap = sub(a, p)
            if den != 0:
                t = cross(ap, s) / den
                u = cross(ap, r) / den
                if 0 <= t <= 1 and 0 <= u <= 1:
                    x = (p[0] + r[0] * t, p[1] + r[1] * t)
                    cuts[i].add(x)
                    cuts[j].add(x)
            elif cross(ap, r) == 0:
                rr = dot(r, r)
                for e in (a, b):
                    t = dot(sub(e, p), r) / rr
                    if 0 <= t <= 1:
                        cuts[i].add(e)
                ss = dot(s, s)
                for e in (p, q):
                    u = dot(sub(e, a), s) / ss
                    if 0 <= u <= 1:
                        cuts[j].add(e)
    return cuts


class SegmentArrangement:
    """Planar subdivision induced by closed segments with rational endpoints.

    Half-edge ``h`` runs ``origin[h] -> origin[h ^ 1]``; its face lies on its
    left.  ``face_of[h]`` is a face index or ``UNBOUNDED``.
    """

    def __init__(self, segments: Iterable[tuple]):
        segs = [(tuple(a), tuple(b)) for a, b in segments if tuple(a) != tuple(b)]
        cuts = _split_points(segs)
        edges = set()
        for (p, q), pts in zip(segs, cuts):
            d = sub(q, p)
            order = sorted(pts, key=lambda x: dot(sub(x, p), d))
            for u, v in zip(order, order[1:]):
                if u != v:
                    edges.add((u, v) if u < v else (v, u))
        self.vertices: list = []
        vid: dict = {}
        for e in sorted(edges):
            for p in e:
                if p not in vid:
                    vid[p] = len(self.vertices)
                    self.vertices.append(p)
        self.origin: list = []
        for u, v in sorted(edges):
            self.origin.append(vid[u])
            self.origin.append(vid[v])
        nh = len(self.origin)
        out: list = [[] for _ in self.vertices]
        for h in range(nh):
            out[self.origin[h]].append(h)
        pos = [0] * nh
        for v, hs in enumerate(out):
            base = self.vertices[v]
            hs.sort(key=cmp_to_key(lambda a, b: _angle_cmp(self._dir(a, base), self._dir(b, base))))
            for i, h in enumerate(hs):
                pos[h] = i
        self.next = [0] * nh
        for h in range(nh):
            t = h ^ 1
            hs = out[self.origin[t]]
            self.next[h] = hs[pos[t] - 1]
        self._build_faces()

    def _dir(self, h, base) -> Point:
        return sub(self.vertices[self.origin[h ^ 1]], base)

    def target(self, h) -> Point:
        return self.vertices[self.origin[h ^ 1]]

    def source(self, h) -> Point:
        return self.vertices[self.origin[h]]

    def _cycles(self) -> list:
        seen = [False] * len(self.origin)
        cycles = []
        for h in range(len(self.origin)):
            if seen[h]:
                continue
            cyc = []
            g = h
            while not seen[g]:
                seen[g] = True
                cyc.append(g)
                g = self.next[g]
            cycles.append(cyc)
        return cycles

    def _build_faces(self) -> None:
        cycles = self._cycles()
        outer, holes = [], []
        for c in cycles:
            poly = [self.source(h) for h in c]
            a = signed_area2(poly)
            (outer if a > 0 else holes).append((c, poly, a))
        # faces ordered by increasing area so the first container is the tightest
        outer.sort(key=lambda t: t[2])
        self.face_outer: list = [c for c, _, _ in outer]
        self.face_polygon: list = [p for _, p, _ in outer]
        self.face_area2: list = [a for _, _, a in outer]
        self.face_holes: list = [[] for _ in outer]
        self.unbounded_holes: list = []
        boxes = [
            (min(p[0] for p in poly), min(p[1] for p in poly), max(p[0] for p in poly), max(p[1] for p in poly))
            for poly in self.face_polygon
        ]
        self.face_of = [UNBOUNDED] * len(self.origin)
        for f, c in enumerate(self.face_outer):
            for h in c:
                self.face_of[h] = f
        for c, poly, _ in holes:
            v = min(poly)
            owner = UNBOUNDED
            for f, poly_f in enumerate(self.face_polygon):
                x0, y0, x1, y1 = boxes[f]
                if not (x0 < v[0] < x1 and y0 < v[1] < y1):
                    continue
                if point_in_polygon(v, poly_f) == 1:
                    owner = f
                    break
            if owner == UNBOUNDED:
                self.unbounded_holes.append(c)
            else:
                self.face_holes[owner].append(c)
            for h in c:
                self.face_of[h] = owner

    @property
    def num_faces(self) -> int:
        return len(self.face_outer)

    def face_sample_point(self, f: int) -> Point:
        """A rational point in the open face ``f``."""
        best = None
        for h in self.face_outer[f]:
            a, b = self.source(h), self.target(h)
            d = sub(b, a)
            L = dot(d, d)
            if best is None or L > best[0]:
                best = (L, h)
        h = best[1]
        a, b = self.source(h), self.target(h)
        m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        n = (a[1] - b[1], b[0] - a[0])
        tmin = None
        edges = list(self.face_outer[f])
        for c in self.face_holes[f]:
            edges.extend(c)
        for g in edges:
            if g == h or g == (h ^ 1):
                continue
            p, q = self.source(g), self.target(g)
            s = sub(q, p)
            den = cross(n, s)
            mp = sub(p, m)
            if den != 0:
                t = cross(mp, s) / den
                u = cross(mp, n) / den
                if t > 0 and 0 <= u <= 1:
                    if tmin is None or t < tmin:
                        tmin = t
            elif cross(mp, n) == 0:
                nn = dot(n, n)
                for e in (p, q):
                    t = dot(sub(e, m), n) / nn
                    if t > 0 and (tmin is None or t < tmin):
                        tmin = t
        if tmin is None:
            raise RuntimeError("face sample ray escaped a bounded face")
        return (m[0] + n[0] * tmin / 2, m[1] + n[1] * tmin / 2)

    def regions(self, selected: Sequence[bool]) -> list:
        """Maximal unions of selected bounded faces.

        Returns ``(outer, holes, faces)`` triples: ``outer`` is a
        counterclockwise vertex cycle, ``holes`` clockwise cycles and
        ``faces`` the member face indices.
        """
        sel = list(selected)

        def inside(h):
            f = self.face_of[h]
            return f != UNBOUNDED and sel[f]

        def boundary(h):
            return inside(h) and not inside(h ^ 1)

        parent = list(range(self.num_faces))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in range(0, len(self.origin), 2):
            f, g = self.face_of[h], self.face_of[h ^ 1]
            if f != UNBOUNDED and g != UNBOUNDED and sel[f] and sel[g]:
                a, b = find(f), find(g)
                if a != b:
                    parent[a] = b
        groups: dict = {}
        for f in range(self.num_faces):
            if sel[f]:
                groups.setdefault(find(f), []).append(f)

        seen = set()
        cycles_of: dict = {}
        for h in range(len(self.origin)):
            if h in seen or not boundary(h):
                continue
            cyc = []
            g = h
            while g not in seen:
                seen.add(g)
                cyc.append(self.source(g))
                c = self.next[g]
                while not boundary(c):
                    c = self.next[c ^ 1]
                g = c
            cycles_of.setdefault(find(self.face_of[h]), []).append(cyc)
        out = []
        for root, faces in groups.items():
            outer, holes = None, []
            for cyc in cycles_of.get(root, []):
                if signed_area2(cyc) > 0 and (outer is None or signed_area2(cyc) > signed_area2(outer)):
                    if outer is not None:
                        holes.append(outer)
                    outer = cyc
                else:
                    holes.append(cyc)
            out.append((outer, holes, sorted(faces)))
        return out


def region_contains(outer: Sequence[Point], holes: Sequence[Sequence[Point]], p: Point) -> int:
    """+1 strictly inside the region, 0 on its boundary, -1 outside."""
    r = point_in_polygon(p, outer)
    if r <= 0:
        return r
    for h in holes:
        s = point_in_polygon(p, h)
        if s == 0:
            return 0
        if s == 1:
            return -1
    return 1


def region_area2(outer, holes) -> mpq:
    return signed_area2(outer) + sum(signed_area2(h) for h in holes)


def faces_where(arr: SegmentArrangement, pred: Callable[[Point], bool]) -> list:
    return [pred(arr.face_sample_point(f)) for f in range(arr.num_faces)]
