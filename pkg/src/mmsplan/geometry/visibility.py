"""Shortest paths inside a polygonal region via its visibility graph."""
from __future__ import annotations

import heapq
import math
from typing import Sequence

from .primitives import Point, orient, segment_params
from .segment_arrangement import region_contains


def _rings(outer, holes) -> list:
    return [outer] + list(holes)


def segment_inside(p: Point, q: Point, outer, holes) -> bool:
    """The closed segment pq lies in the closed region."""
    if region_contains(outer, holes, p) < 0:
        return False
    if region_contains(outer, holes, q) < 0:
        return False
    if p == q:
        return True
    ts = {0, 1}
    for ring in _rings(outer, holes):
        n = len(ring)
        for i in range(n):
            ts.update(segment_params(p, q, ring[i], ring[(i + 1) % n]))
    ts = sorted(ts)
    for t0, t1 in zip(ts, ts[1:]):
        m = (t0 + t1) / 2
        x = (p[0] + (q[0] - p[0]) * m, p[1] + (q[1] - p[1]) * m)
        if region_contains(outer, holes, x) < 0:
            return False
    return True


def _dist(a: Point, b: Point) -> float:
    return math.hypot(float(a[0] - b[0]), float(a[1] - b[1]))


def reflex_vertices(outer, holes) -> list:
    out = []
    for ring in _rings(outer, holes):
        n = len(ring)
        for i in range(n):
            if orient(ring[i - 1], ring[i], ring[(i + 1) % n]) < 0:
                out.append(ring[i])
    return out


def visibility_shortest_path(region, a: Point, b: Point) -> list:
    """Shortest polyline from a to b inside the closed region.

    ``region`` is a PolygonSet or an ``(outer, holes)`` pair.  Raises
    ValueError("disconnected") when a and b are not in one component.
    """
    regions = region.regions if hasattr(region, "regions") else [region]
    home = None
    for outer, holes in regions:
        if region_contains(outer, holes, a) >= 0 and region_contains(outer, holes, b) >= 0:
            home = (outer, holes)
            break
    if home is None:
        raise ValueError("disconnected")
    outer, holes = home
    if segment_inside(a, b, outer, holes):
        return [a, b]
    nodes = [a, b] + [v for v in dict.fromkeys(reflex_vertices(outer, holes)) if v != a and v != b]
    n = len(nodes)
    vis_cache: dict = {}

    def visible(i, j):
        key = (i, j) if i < j else (j, i)
        if key not in vis_cache:
            vis_cache[key] = segment_inside(nodes[i], nodes[j], outer, holes)
        return vis_cache[key]

    # A* with straight-line heuristic
    best = [math.inf] * n
    prev = [-1] * n
    best[0] = 0.0
    heap = [(_dist(a, b), 0)]
    done = [False] * n
    while heap:
        _, i = heapq.heappop(heap)
        if done[i]:
            continue
        done[i] = True
        if i == 1:
            break
        for j in range(n):
            if done[j] or j == i:
                continue
            d = best[i] + _dist(nodes[i], nodes[j])
            if d < best[j] and visible(i, j):
                best[j] = d
                prev[j] = i
                heapq.heappush(heap, (d + _dist(nodes[j], b), j))
    if prev[1] < 0:
        raise ValueError("disconnected")
    path = [1]
    while path[-1] != 0:
        path.append(prev[path[-1]])
    return [nodes[k] for k in reversed(path)]


def path_length(path: Sequence[Point]) -> float:
    return sum(_dist(p, q) for p, q in zip(path, path[1:]))
