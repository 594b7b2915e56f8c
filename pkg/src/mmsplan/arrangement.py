"""Exact arrangement of rational-function arcs inside an axis box.

The box is cut into vertical slabs at every event x-coordinate (arc ends,
box crossings, pairwise intersections, vertical walls).  Inside a slab the
active arcs are totally ordered, giving trapezoids; trapezoids on the two
sides of an event line are glued when their extents on that line overlap in
a segment.  Faces are the glued classes.  Vertices and edges are read off
the per-event groups of equal y-values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional, Sequence

import numpy as np
from gmpy2 import mpq

from .curves import (
    CurveValue,
    RationalFunction,
    XMonotoneArc,
    crossings,
    evaluate,
    pair_topology,
    poles,
)
from .numeric import (
    AlgebraicReal,
    Q,
    compare,
    degree,
    descartes_count,
    isolate_real_roots,
    peval,
    pderiv,
    pmul,
    psub,
    rational_between,
    sgn,
    simplest_between,
    strip,
)

BOTTOM = -1
TOP = -2


@dataclass(frozen=True)
class Box:
    xlo: mpq
    xhi: mpq
    ylo: mpq = mpq(0)
    yhi: mpq = mpq(1)

    def __post_init__(self):
        for name in ("xlo", "xhi", "ylo", "yhi"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if not (self.xlo < self.xhi and self.ylo < self.yhi):
            raise ValueError("empty box")


@dataclass
class Piece:
    """Part of a curve lying inside the open box over [a, b]."""

    curve: RationalFunction
    a: object
    b: object
    ia: int = -1
    ib: int = -1


@dataclass(frozen=True)
class Location:
    kind: str  # "face", "edge" or "vertex"
    face: Optional[int] = None
    piece: Optional[int] = None


@dataclass
class Cell:
    """Pseudo-trapezoid of a face decomposition."""

    face: int
    x_lo: object
    x_hi: object
    lower: int
    upper: int
    sample: tuple
    traps: list = field(default_factory=list)


def _real_key(a, b):
    return compare(a, b)


def _as_exact(x):
    if isinstance(x, AlgebraicReal) and x.is_rational:
        return x.lo
    return x


def _clip_range(lo, hi, xlo, xhi):
    lo = xlo if lo is None or compare(lo, xlo) < 0 else lo
    hi = xhi if hi is None or compare(hi, xhi) > 0 else hi
    if compare(lo, hi) >= 0:
        return None
    return lo, hi


def _merge_ranges(ranges: list) -> list:
    ranges = sorted(ranges, key=cmp_to_key(lambda r, s: compare(r[0], s[0])))
    out = []
    for lo, hi in ranges:
        if out and compare(lo, out[-1][1]) <= 0:
            if compare(hi, out[-1][1]) > 0:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def value_at(f: RationalFunction, x):
    """f(x) as an exact rational when x is rational, else a CurveValue."""
    x = _as_exact(x)
    if not isinstance(x, AlgebraicReal):
        return evaluate(f, x)
    if f.is_constant:
        return f.constant_value
    return CurveValue(f, x)


def _cmp_values(u, v) -> int:
    """Compare two values produced by value_at at the same x."""
    uq = not isinstance(u, CurveValue)
    vq = not isinstance(v, CurveValue)
    if uq and vq:
        return sgn(u - v)
    if uq:
        return -v.compare_rational(u)
    if vq:
        return u.compare_rational(v)
    return u.compare(v)


class _Enclosed:
    """A value with a cached float enclosure for quick ordering."""

    __slots__ = ("v", "lo", "hi")

    def __init__(self, v):
        self.v = v
        if isinstance(v, CurveValue):
            lo, hi = v.enclosure(mpq(1, 1 << 50))
            self.lo, self.hi = float(lo) - 1e-12 * (1 + abs(float(lo))), float(hi) + 1e-12 * (1 + abs(float(hi)))
        else:
            self.lo = self.hi = None

    def cmp(self, other: "_Enclosed") -> int:
        if self.lo is None and other.lo is None:
            return sgn(self.v - other.v)
        alo = self.lo if self.lo is not None else float(self.v)
        ahi = self.hi if self.hi is not None else float(self.v)
        blo = other.lo if other.lo is not None else float(other.v)
        bhi = other.hi if other.hi is not None else float(other.v)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        return _cmp_values(self.v, other.v)


class Arrangement:
    """Exact subdivision of ``box`` by arcs and optional full-height walls."""

    def __init__(self, arcs: Sequence[XMonotoneArc], box: Box, walls: Sequence = ()):
        self.box = box
        self.pieces: list = self._make_pieces(arcs)
        self._walls_in = [w for w in walls if compare(w, box.xlo) > 0 and compare(w, box.xhi) < 0]
        self._sweep()

    # ------------------------------------------------------------------
    # construction

    def _make_pieces(self, arcs) -> list:
        box = self.box
        by_curve: dict = {}
        for arc in arcs:
            f = arc.curve
            c = f.constant_value
            if c is not None and (c <= box.ylo or c >= box.yhi):
                continue
            r = _clip_range(arc.lo, arc.hi, box.xlo, box.xhi)
            if r is None:
                continue
            by_curve.setdefault(f.key, (f, []))[1].append(r)
        pieces = []
        for f, ranges in by_curve.values():
            pole_list = poles(f)
            cut_lo = crossings(f, box.ylo) if not f.is_constant else []
            cut_hi = crossings(f, box.yhi) if not f.is_constant else []
            cuts = pole_list + cut_lo + cut_hi
            for lo, hi in _merge_ranges(ranges):
                inner = [c for c in cuts if compare(c, lo) > 0 and compare(c, hi) < 0]
                inner.sort(key=cmp_to_key(_real_key))
                ends = [lo] + inner + [hi]
                for a, b in zip(ends, ends[1:]):
                    if compare(a, b) >= 0:
                        continue
                    xm = rational_between(a, b)
                    if peval(f.den, xm) == 0:
                        continue
                    y = evaluate(f, xm)
                    if box.ylo < y < box.yhi:
                        pieces.append(Piece(f, _as_exact(a), _as_exact(b)))
        # touching pieces of one curve (split only by a tangency with the box) stay separate
        return pieces

    def _pair_events(self) -> list:
        pcs = self.pieces
        n = len(pcs)
        if n < 2:
            return []
        xs = np.array([[float(p.a), float(p.b)] for p in pcs])
        pad = 1e-9 * (1 + np.abs(xs).max())
        lo = xs[:, 0] - pad
        hi = xs[:, 1] + pad
        ybox = np.array([self._y_enclosure(p) for p in pcs])
        out = []
        for i in range(n - 1):
            cand = np.nonzero(
                (lo[i + 1 :] <= hi[i])
                & (hi[i + 1 :] >= lo[i])
                & (ybox[i + 1 :, 0] <= ybox[i, 1])
                & (ybox[i + 1 :, 1] >= ybox[i, 0])
            )[0]
            p = pcs[i]
            for k in cand:
                q = pcs[i + 1 + int(k)]
                if p.curve.key == q.curve.key:
                    continue
                L = p.a if compare(p.a, q.a) >= 0 else q.a
                R = p.b if compare(p.b, q.b) <= 0 else q.b
                if compare(L, R) >= 0:
                    continue
                if not self._may_meet(p, q, L, R):
                    continue
                t = pair_topology(p.curve, q.curve)
                for x in t.intersections():
                    if compare(x, L) > 0 and compare(x, R) < 0:
                        out.append(x)
        return out

    def _y_enclosure(self, p: Piece) -> tuple:
        """Loose float y-range of a piece (it lies in the box anyway)."""
        return float(self.box.ylo) - 1e-9, float(self.box.yhi) + 1e-9

    @staticmethod
    def _may_meet(p: Piece, q: Piece, L, R) -> bool:
        """Cheap exact rejection: r has no root in [L, R] by Descartes' bound."""
        f, g = p.curve, q.curve
        r = psub(pmul(f.num, g.den), pmul(g.num, f.den))
        if not r:
            return False
        lo = L.lo if isinstance(L, AlgebraicReal) else L
        hi = R.hi if isinstance(R, AlgebraicReal) else R
        if lo >= hi:
            return True
        if peval(r, lo) == 0 or peval(r, hi) == 0:
            return True
        return descartes_count(r, lo, hi) > 0

    def _sweep(self) -> None:
        box = self.box
        raw = [box.xlo, box.xhi] + list(self._walls_in)
        for p in self.pieces:
            raw.append(p.a)
            raw.append(p.b)
        raw.extend(self._pair_events())
        raw.sort(key=cmp_to_key(_real_key))
        events = []
        for x in raw:
            if not events or compare(events[-1], x) != 0:
                events.append(_as_exact(x))
        self.events = events
        ne = len(events)
        self.is_wall = [False] * ne
        for w in self._walls_in:
            self.is_wall[self._event_index(w)] = True
        for p in self.pieces:
            p.ia = self._event_index(p.a)
            p.ib = self._event_index(p.b)
        # slabs
        nslab = ne - 1
        self.slab_x = [rational_between(events[k], events[k + 1]) for k in range(nslab)]
        starts: list = [[] for _ in range(ne)]
        for i, p in enumerate(self.pieces):
            starts[p.ia].append(i)
        active: list = []
        self.slab_active: list = []
        for k in range(nslab):
            active = [i for i in active if self.pieces[i].ib > k] + starts[k]
            xs = self.slab_x[k]
            vals = {i: evaluate(self.pieces[i].curve, xs) for i in active}
            active.sort(key=lambda i: vals[i])
            self.slab_active.append(list(active))
        self.trap_base = [0] * (nslab + 1)
        for k in range(nslab):
            self.trap_base[k + 1] = self.trap_base[k] + len(self.slab_active[k]) + 1
        ntrap = self.trap_base[-1]
        parent = list(range(ntrap))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        self.trap_links: list = []
        self.event_classes: list = []
        for k in range(ne):
            info = self._event_info(k)
            self.event_classes.append(info)
            if k == 0 or k == ne - 1 or self.is_wall[k]:
                continue
            left = self._trap_class_intervals(k - 1, info, k)
            right = self._trap_class_intervals(k, info, k)
            # two-pointer sweep over sorted intervals
            i = j = 0
            while i < len(left) and j < len(right):
                a0, a1 = left[i]
                b0, b1 = right[j]
                if max(a0, b0) < min(a1, b1):
                    t1 = self.trap_base[k - 1] + i
                    t2 = self.trap_base[k] + j
                    self.trap_links.append((t1, t2, k, max(a0, b0), min(a1, b1)))
                    ra, rb = find(t1), find(t2)
                    if ra != rb:
                        parent[ra] = rb
                if a1 <= b1:
                    i += 1
                else:
                    j += 1
        roots = {}
        self.trap_face = [0] * ntrap
        for t in range(ntrap):
            r = find(t)
            if r not in roots:
                roots[r] = len(roots)
            self.trap_face[t] = roots[r]
        self.face_traps: list = [[] for _ in roots]
        for t in range(ntrap):
            self.face_traps[self.trap_face[t]].append(t)
        self.classification: dict = {}
        self._count_cells()

    def _event_index(self, x) -> int:
        lo, hi = 0, len(self.events)
        while lo < hi:
            mid = (lo + hi) // 2
            c = compare(x, self.events[mid])
            if c == 0:
                return mid
            if c < 0:
                hi = mid
            else:
                lo = mid + 1
        raise KeyError("not an event")

    def _event_info(self, k: int) -> dict:
        """Groups of equal y-values on the line x = events[k], bottom to top.

        Returns a dict with ``classes`` (list of member lists; BOTTOM and TOP
        are members of the first and last class), ``class_of`` (piece ->
        class index), ``values`` (one representative value per class) and
        ``vertex`` (per-class flag).
        """
        x = self.events[k]
        box = self.box
        members = []
        for i, p in enumerate(self.pieces):
            if p.ia <= k <= p.ib:
                members.append(i)
        ent = {BOTTOM: _Enclosed(box.ylo), TOP: _Enclosed(box.yhi)}
        for i in members:
            ent[i] = _Enclosed(value_at(self.pieces[i].curve, x))
        order = sorted([BOTTOM, TOP] + members, key=cmp_to_key(lambda a, b: ent[a].cmp(ent[b])))
        classes: list = []
        for i in order:
            if classes and ent[classes[-1][0]].cmp(ent[i]) == 0:
                classes[-1].append(i)
            else:
                classes.append([i])
        class_of = {}
        for c, grp in enumerate(classes):
            for i in grp:
                class_of[i] = c
        side = k == 0 or k == len(self.events) - 1 or self.is_wall[k]
        vertex = []
        for grp in classes:
            pcs = [i for i in grp if i >= 0]
            if side:
                v = True
            elif BOTTOM in grp or TOP in grp:
                v = bool(pcs)
            else:
                v = len(pcs) >= 2 or any(self.pieces[i].ia == k or self.pieces[i].ib == k for i in pcs)
            vertex.append(v)
        return {
            "classes": classes,
            "class_of": class_of,
            "values": [ent[g[0]].v for g in classes],
            "vertex": vertex,
        }

    def _trap_class_intervals(self, slab: int, info: dict, k: int) -> list:
        act = self.slab_active[slab]
        bounds = [BOTTOM] + act + [TOP]
        co = info["class_of"]
        return [(co[bounds[j]], co[bounds[j + 1]]) for j in range(len(bounds) - 1)]

    def _count_cells(self) -> None:
        ne = len(self.events)
        vid = {}
        for k, info in enumerate(self.event_classes):
            for c, v in enumerate(info["vertex"]):
                if v:
                    vid[(k, c)] = len(vid)
        parent = list(range(len(vid)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def link(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        edges = []

        def chain(ids):
            for a, b in zip(ids, ids[1:]):
                edges.append((a, b))
                link(a, b)

        self.piece_vertices: list = []
        for i, p in enumerate(self.pieces):
            ids = []
            for k in range(p.ia, p.ib + 1):
                c = self.event_classes[k]["class_of"][i]
                if self.event_classes[k]["vertex"][c]:
                    ids.append(vid[(k, c)])
            self.piece_vertices.append(ids)
            chain(ids)
        for tag in (BOTTOM, TOP):
            ids = []
            for k in range(ne):
                info = self.event_classes[k]
                c = info["class_of"][tag]
                if info["vertex"][c]:
                    ids.append(vid[(k, c)])
            chain(ids)
        for k in range(ne):
            if k == 0 or k == ne - 1 or self.is_wall[k]:
                n = len(self.event_classes[k]["classes"])
                chain([vid[(k, c)] for c in range(n)])
        self.vertex_ids = vid
        self.edge_list = edges
        self.num_vertices = len(vid)
        self.num_edges = len(edges)
        self.num_bounded_faces = len(self.face_traps)
        self.num_faces = self.num_bounded_faces + 1
        self.num_components = len({find(a) for a in range(len(vid))})

    # ------------------------------------------------------------------
    # summary

    @property
    def euler_characteristic(self) -> int:
        """V - E + F counting the outer face (equals 1 + components)."""
        return self.num_vertices - self.num_edges + self.num_faces

    def vertices(self) -> list:
        """(x, y) pairs; y is a rational or a CurveValue."""
        out = []
        for (k, c) in self.vertex_ids:
            out.append((self.events[k], self.event_classes[k]["values"][c]))
        return out

    # ------------------------------------------------------------------
    # trapezoids

    def trap_slab(self, t: int) -> tuple:
        """(slab index, position within slab)."""
        lo, hi = 0, len(self.trap_base) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.trap_base[mid] <= t:
                lo = mid
            else:
                hi = mid
        return lo, t - self.trap_base[lo]

    def trap_bounds(self, t: int) -> tuple:
        k, j = self.trap_slab(t)
        bounds = [BOTTOM] + self.slab_active[k] + [TOP]
        return bounds[j], bounds[j + 1]

    def bound_value(self, b: int, x):
        if b == BOTTOM:
            return self.box.ylo
        if b == TOP:
            return self.box.yhi
        return value_at(self.pieces[b].curve, x)

    def trap_sample(self, t: int) -> tuple:
        k, _ = self.trap_slab(t)
        x = self.slab_x[k]
        lo, hi = self.trap_bounds(t)
        return x, (self.bound_value(lo, x) + self.bound_value(hi, x)) / 2

    def face_sample_point(self, face: int) -> tuple:
        """A rational point strictly inside the face."""
        traps = self.face_traps[face]
        # prefer the widest slab for a well-conditioned sample
        return self.trap_sample(traps[len(traps) // 2])

    # ------------------------------------------------------------------
    # queries

    def _slab_of(self, x) -> tuple:
        """(slab, None) if x is inside a slab, (None, event) if x is an event."""
        ev = self.events
        lo, hi = 0, len(ev)
        while lo < hi:
            mid = (lo + hi) // 2
            c = compare(x, ev[mid])
            if c == 0:
                return None, mid
            if c < 0:
                hi = mid
            else:
                lo = mid + 1
        return lo - 1, None

    def locate(self, p: tuple) -> Location:
        x, y = Q(p[0]), Q(p[1])
        b = self.box
        if not (b.xlo <= x <= b.xhi and b.ylo <= y <= b.yhi):
            raise ValueError("point outside box")
        slab, ev = self._slab_of(x)
        if slab is not None:
            bounds = [BOTTOM] + self.slab_active[slab] + [TOP]
            lo, hi = 0, len(bounds) - 1
            if y == b.ylo:
                return Location("edge", piece=BOTTOM)
            if y == b.yhi:
                return Location("edge", piece=TOP)
            while hi - lo > 1:
                mid = (lo + hi) // 2
                v = self.bound_value(bounds[mid], x)
                if v == y:
                    return Location("edge", piece=bounds[mid])
                if v < y:
                    lo = mid
                else:
                    hi = mid
            return Location("face", face=self.trap_face[self.trap_base[slab] + lo])
        info = self.event_classes[ev]
        vals = info["values"]
        lo, hi = 0, len(vals) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            c = _cmp_values(vals[mid], y)
            if c == 0:
                if info["vertex"][mid]:
                    return Location("vertex")
                grp = [i for i in info["classes"][mid]]
                return Location("edge", piece=grp[0])
            if c < 0:
                lo = mid + 1
            else:
                hi = mid - 1
        c = hi  # y lies between class c and c + 1
        if ev == 0 or ev == len(self.events) - 1 or self.is_wall[ev]:
            return Location("edge")
        return Location("face", face=self._face_across(ev, c))

    def _face_across(self, ev: int, c: int) -> int:
        info = self.event_classes[ev]
        slab = ev - 1 if ev > 0 else ev
        for j, (a0, a1) in enumerate(self._trap_class_intervals(slab, info, ev)):
            if a0 <= c and c + 1 <= a1:
                return self.trap_face[self.trap_base[slab] + j]
        raise RuntimeError("event gap not covered")

    def vertical_fiber(self, x0, allow_events: bool = False) -> list:
        """Faces met by the line x = x0, bottom to top, with their y-intervals.

        Raises ValueError("degenerate fiber") when x0 is an event coordinate
        unless ``allow_events``; then gaps lying on a wall or box side get
        face ``None``.
        """
        x0 = Q(x0)
        b = self.box
        if not (b.xlo <= x0 <= b.xhi):
            raise ValueError("outside box")
        slab, ev = self._slab_of(x0)
        if slab is not None:
            bounds = [BOTTOM] + self.slab_active[slab] + [TOP]
            vals = [self.bound_value(i, x0) for i in bounds]
            return [
                (self.trap_face[self.trap_base[slab] + j], (vals[j], vals[j + 1]))
                for j in range(len(bounds) - 1)
            ]
        if not allow_events:
            raise ValueError("degenerate fiber")
        info = self.event_classes[ev]
        vals = info["values"]
        out = []
        side = self.is_wall[ev]
        for c in range(len(vals) - 1):
            if side:
                face = None
            elif ev == 0 or ev == len(self.events) - 1:
                slab = 0 if ev == 0 else ev - 1
                face = None
                for j, (a0, a1) in enumerate(self._trap_class_intervals(slab, info, ev)):
                    if a0 <= c and c + 1 <= a1:
                        face = self.trap_face[self.trap_base[slab] + j]
            else:
                face = self._face_across(ev, c)
            out.append((face, (vals[c], vals[c + 1])))
        return out

    # ------------------------------------------------------------------
    # face decomposition and local paths

    def trap_adjacency(self) -> dict:
        adj: dict = {}
        for t1, t2, k, c0, c1 in self.trap_links:
            adj.setdefault(t1, []).append((t2, k, c0, c1))
            adj.setdefault(t2, []).append((t1, k, c0, c1))
        return adj

    def decompose_face(self, face: int) -> tuple:
        """Pseudo-trapezoids of a face and their adjacency.

        Trapezoids of consecutive slabs are merged when nothing happens on
        their bounding arcs at the shared event, then split at interior
        extrema of the bounding arcs.  Returns ``(cells, edges)``.
        """
        traps = set(self.face_traps[face])
        adj = self.trap_adjacency()
        # merge runs
        nxt, prv = {}, {}
        for t in traps:
            for u, k, c0, c1 in adj.get(t, []):
                ks, _ = self.trap_slab(t)
                ku, _ = self.trap_slab(u)
                if ku != ks + 1:
                    continue
                if self.trap_bounds(t) != self.trap_bounds(u):
                    continue
                info = self.event_classes[k]
                lo, hi = self.trap_bounds(t)
                if info["vertex"][info["class_of"][lo]] or info["vertex"][info["class_of"][hi]]:
                    continue
                nxt[t] = u
                prv[u] = t
        runs = []
        run_of = {}
        for t in sorted(traps):
            if t in prv:
                continue
            run = [t]
            while run[-1] in nxt:
                run.append(nxt[run[-1]])
            for u in run:
                run_of[u] = len(runs)
            runs.append(run)
        cells: list = []
        first_cell, last_cell = {}, {}
        edges = set()
        for r, run in enumerate(runs):
            k0, _ = self.trap_slab(run[0])
            k1, _ = self.trap_slab(run[-1])
            x_lo, x_hi = self.events[k0], self.events[k1 + 1]
            lower, upper = self.trap_bounds(run[0])
            cuts = []
            for bnd in (lower, upper):
                if bnd >= 0:
                    cuts.extend(_extrema(self.pieces[bnd].curve, x_lo, x_hi))
            cuts.sort(key=cmp_to_key(_real_key))
            uniq = []
            for c in cuts:
                if not uniq or compare(uniq[-1], c) != 0:
                    uniq.append(c)
            ends = [x_lo] + uniq + [x_hi]
            ids = []
            for a, b in zip(ends, ends[1:]):
                xm = rational_between(a, b)
                ym = (self.bound_value(lower, xm) + self.bound_value(upper, xm)) / 2
                cells.append(Cell(face, a, b, lower, upper, (xm, ym), list(run)))
                ids.append(len(cells) - 1)
            for a, b in zip(ids, ids[1:]):
                edges.add((a, b))
            first_cell[r] = ids[0]
            last_cell[r] = ids[-1]
        for t1, t2, k, c0, c1 in self.trap_links:
            if t1 in traps and t2 in traps:
                r1, r2 = run_of[t1], run_of[t2]
                if r1 != r2:
                    edges.add((last_cell[r1], first_cell[r2]))
        return cells, sorted(edges)

    def face_path(self, face: int, p: tuple, q: tuple, max_depth: int = 40) -> list:
        """Rational polyline from p to q inside the open face (exactly verified).

        p and q must lie strictly inside ``face``; an endpoint on an event
        line is first moved horizontally into a neighbouring trapezoid.
        """
        p = (Q(p[0]), Q(p[1]))
        q = (Q(q[0]), Q(q[1]))
        head, tail = [], []
        if self._slab_of(p[0])[0] is None:
            head = [p]
            p = self._step_off_event(p, face)
        if self._slab_of(q[0])[0] is None:
            tail = [q]
            q = self._step_off_event(q, face)
        return head + self._face_path(face, p, q, max_depth) + tail

    def _step_off_event(self, p: tuple, face: int) -> tuple:
        x, y = p
        ev = self._slab_of(x)[1]
        info = self.event_classes[ev]
        for side in (1, -1):
            s = ev if side > 0 else ev - 1
            if s < 0 or s >= len(self.slab_active):
                continue
            for j, (c0, c1) in enumerate(self._trap_class_intervals(s, info, ev)):
                if not (_cmp_values(info["values"][c0], y) < 0 < _cmp_values(info["values"][c1], y)):
                    continue
                t = self.trap_base[s] + j
                if self.trap_face[t] != face:
                    continue
                lim = self.events[s + 1] if side > 0 else self.events[s]
                for bnd in self.trap_bounds(t):
                    if bnd < 0:
                        continue
                    g = self.pieces[bnd].curve.minus_constant(y)
                    if not g:
                        continue
                    for r, _ in isolate_real_roots(g):
                        if side > 0 and compare(r, x) > 0 and compare(r, lim) < 0:
                            lim = r
                        if side < 0 and compare(r, x) < 0 and compare(r, lim) > 0:
                            lim = r
                xr = rational_between(x, lim) if side > 0 else rational_between(lim, x)
                return (xr, y)
        raise ValueError("point is not inside the face")

    def _face_path(self, face: int, p: tuple, q: tuple, max_depth: int) -> list:
        tp = self._trap_of_point(p)
        tq = self._trap_of_point(q)
        if self.trap_face[tp] != face or self.trap_face[tq] != face:
            raise ValueError("endpoint not in face")
        adj = self.trap_adjacency()
        prev = {tp: None}
        queue = [tp]
        for t in queue:
            if t == tq:
                break
            for u, k, c0, c1 in adj.get(t, []):
                if u not in prev:
                    prev[u] = (t, k, c0, c1)
                    queue.append(u)
        chain = []
        t = tq
        while prev[t] is not None:
            u, k, c0, c1 = prev[t]
            chain.append((u, t, k, c0, c1))
            t = u
        chain.reverse()
        pts = [p]
        cur_trap = tp
        for u, t, k, c0, c1 in chain:
            a, b, y = self._crossing(u, t, k, c0, c1)
            pts.extend(self._inside_path(cur_trap, pts[-1], a, max_depth)[1:])
            pts.append(b)
            cur_trap = t
        pts.extend(self._inside_path(cur_trap, pts[-1], q, max_depth)[1:])
        return pts

    def _trap_of_point(self, p) -> int:
        x, y = Q(p[0]), Q(p[1])
        slab, ev = self._slab_of(x)
        if slab is None:
            raise ValueError("point on an event line")
        bounds = [BOTTOM] + self.slab_active[slab] + [TOP]
        for j in range(len(bounds) - 1):
            lo = self.bound_value(bounds[j], x)
            hi = self.bound_value(bounds[j + 1], x)
            if lo < y < hi:
                return self.trap_base[slab] + j
        raise ValueError("point on an arc")

    def _crossing(self, t1: int, t2: int, k: int, c0: int, c1: int) -> tuple:
        """Horizontal hop across event line k from trapezoid t1 to t2."""
        info = self.event_classes[k]
        vlo, vhi = info["values"][c0], info["values"][c0 + 1]
        y = _rational_between_values(vlo, vhi)
        x = self.events[k]
        pts = []
        first = -1 if self.trap_slab(t1)[0] < self.trap_slab(t2)[0] else 1
        for t, side in ((t1, first), (t2, -first)):
            ks, _ = self.trap_slab(t)
            other = self.events[ks] if side < 0 else self.events[ks + 1]
            lim = other
            for bnd in self.trap_bounds(t):
                if bnd < 0:
                    continue
                f = self.pieces[bnd].curve
                g = f.minus_constant(y)
                if not g:
                    continue
                for r, _ in isolate_real_roots(g):
                    if side < 0 and compare(r, x) < 0 and compare(r, lim) > 0:
                        lim = r
                    if side > 0 and compare(r, x) > 0 and compare(r, lim) < 0:
                        lim = r
            xr = rational_between(lim, x) if side < 0 else rational_between(x, lim)
            pts.append((xr, y))
        return pts[0], pts[1], y

    def _inside_path(self, t: int, p: tuple, q: tuple, depth: int) -> list:
        lo, hi = self.trap_bounds(t)
        if self._segment_clear(lo, hi, p, q):
            return [p, q]
        if depth <= 0:
            raise RuntimeError("local path refinement did not converge")
        xm = (p[0] + q[0]) / 2
        ym = (self.bound_value(lo, xm) + self.bound_value(hi, xm)) / 2
        m = (xm, ym)
        left = self._inside_path(t, p, m, depth - 1)
        right = self._inside_path(t, m, q, depth - 1)
        return left + right[1:]

    def _segment_clear(self, lo: int, hi: int, p: tuple, q: tuple) -> bool:
        """The closed segment pq stays strictly between arcs lo and hi."""
        xa, xb = min(p[0], q[0]), max(p[0], q[0])
        for bnd, want in ((lo, -1), (hi, 1)):
            if bnd < 0:
                c = self.box.ylo if bnd == BOTTOM else self.box.yhi
                if want < 0 and (p[1] <= c or q[1] <= c):
                    return False
                if want > 0 and (p[1] >= c or q[1] >= c):
                    return False
                continue
            f = self.pieces[bnd].curve
            if xa == xb:
                v = evaluate(f, xa)
                if want < 0 and not (v < min(p[1], q[1])):
                    return False
                if want > 0 and not (v > max(p[1], q[1])):
                    return False
                continue
            # N = f_n - l f_d with l the supporting line; N must not vanish on [xa, xb]
            s = (q[1] - p[1]) / (q[0] - p[0])
            c0 = p[1] - s * p[0]
            den = math.lcm(int(c0.denominator), int(s.denominator))
            line = strip((int(c0 * den), int(s * den)))
            n_poly = psub(tuple(c * den for c in f.num), pmul(line, f.den))
            if not n_poly:
                return False
            if peval(n_poly, xa) == 0 or peval(n_poly, xb) == 0:
                return False
            if degree(n_poly) > 0 and descartes_count(n_poly, xa, xb) > 0:
                # Descartes may overcount; confirm with isolation
                if any(compare(r, xa) > 0 and compare(r, xb) < 0 for r, _ in isolate_real_roots(n_poly)):
                    return False
            # sign at one point decides the side
            xm = (xa + xb) / 2
            v = evaluate(f, xm)
            lm = p[1] + s * (xm - p[0])
            if want < 0 and not (v < lm):
                return False
            if want > 0 and not (v > lm):
                return False
        return True


def _rational_between_values(u, v) -> mpq:
    """Rational strictly between two values u < v (rationals or CurveValues)."""
    width = mpq(1, 1 << 20)
    while True:
        ulo, uhi = (u, u) if not isinstance(u, CurveValue) else u.enclosure(width)
        vlo, vhi = (v, v) if not isinstance(v, CurveValue) else v.enclosure(width)
        if uhi < vlo:
            return simplest_between(uhi, vlo)
        width /= 1 << 20


def _extrema(f: RationalFunction, lo, hi) -> list:
    """x in (lo, hi) where f has a strict local extremum."""
    if f.is_constant:
        return []
    d = psub(pmul(pderiv(f.num), f.den), pmul(f.num, pderiv(f.den)))
    if not d:
        return []
    out = []
    for r, m in isolate_real_roots(d):
        if m % 2 == 1 and compare(r, lo) > 0 and compare(r, hi) < 0:
            out.append(_as_exact(r))
    return out


def build(arcs: Sequence[XMonotoneArc], box: Box, walls: Sequence = ()) -> Arrangement:
    return Arrangement(arcs, box, walls)
