"""Probabilistic roadmap over SE(2) used as a baseline.

Floating point throughout; collision checks along local paths are
discretized at a fixed resolution.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry.polygons import collides
from .geometry.primitives import Configuration, rotation_at
from .numeric import Q


@dataclass
class Metric:
    w_xy: float = 1.0
    w_theta: float = 1.0

    def __post_init__(self):
        if self.w_xy <= 0 or self.w_theta <= 0:
            raise ValueError("metric weights must be positive")

    def distance(self, a, b) -> float:
        dx, dy = a[0] - b[0], a[1] - b[1]
        dth = angle_diff(a[2], b[2])
        return math.sqrt(self.w_xy * (dx * dx + dy * dy) + self.w_theta * dth * dth)

    def distances(self, pts: np.ndarray, q) -> np.ndarray:
        d = pts - np.asarray(q, dtype=float)
        dth = (d[:, 2] + math.pi) % (2 * math.pi) - math.pi
        return np.sqrt(self.w_xy * (d[:, 0] ** 2 + d[:, 1] ** 2) + self.w_theta * dth**2)


def angle_diff(a: float, b: float) -> float:
    return (a - b + math.pi) % (2 * math.pi) - math.pi


class FloatChecker:
    """Floating-point SAT collision test on the scene's convex pieces."""

    def __init__(self, scene, exact: bool = False):
        self.scene = scene
        self.exact = exact
        self.box = tuple(float(v) for v in scene.workspace)
        self.robot = np.array([[float(x), float(y)] for x, y in scene.robot])
        self.robot_pieces = [np.array([[float(x), float(y)] for x, y in p]) for p in scene.robot_pieces]
        self.obstacles = [np.array([[float(x), float(y)] for x, y in p]) for p in scene.obstacle_pieces]
        self.ob_boxes = np.array([[o[:, 0].min(), o[:, 1].min(), o[:, 0].max(), o[:, 1].max()] for o in self.obstacles]).reshape(-1, 4)
        self.ob_axes = [_axes(o) for o in self.obstacles]
        self.radius = float(np.sqrt((self.robot**2).sum(axis=1)).max())
        self.checks = 0

    def collides(self, q) -> bool:
        self.checks += 1
        if self.exact:
            return collides(self.scene, to_configuration(q))
        x, y, th = q
        c, s = math.cos(th), math.sin(th)
        rot = np.array([[c, s], [-s, c]])
        placed = self.robot @ rot + (x, y)
        xmin, ymin, xmax, ymax = self.box
        tol = 1e-12
        if placed[:, 0].min() < xmin - tol or placed[:, 0].max() > xmax + tol:
            return True
        if placed[:, 1].min() < ymin - tol or placed[:, 1].max() > ymax + tol:
            return True
        if not self.obstacles:
            return False
        lo = placed.min(axis=0)
        hi = placed.max(axis=0)
        b = self.ob_boxes
        near = np.nonzero((b[:, 0] < hi[0]) & (b[:, 2] > lo[0]) & (b[:, 1] < hi[1]) & (b[:, 3] > lo[1]))[0]
        if len(near) == 0:
            return False
        pieces = [p @ rot + (x, y) for p in self.robot_pieces]
        for i in near:
            ob = self.obstacles[i]
            for rp in pieces:
                if _overlap(rp, _axes(rp), ob, self.ob_axes[i]):
                    return True
        return False


def _axes(poly: np.ndarray) -> np.ndarray:
    e = np.roll(poly, -1, axis=0) - poly
    return np.stack([-e[:, 1], e[:, 0]], axis=1)


def _overlap(p, pa, q, qa, tol=1e-12) -> bool:
    for axes in (pa, qa):
        pp = p @ axes.T
        qq = q @ axes.T
        sep = (pp.max(axis=0) <= qq.min(axis=0) + tol) | (qq.max(axis=0) <= pp.min(axis=0) + tol)
        if sep.any():
            return False
    return True


def to_configuration(q) -> Configuration:
    return Configuration((Q(q[0]), Q(q[1])), rotation_at(q[2]))


def from_configuration(c: Configuration) -> tuple:
    x, y = c.as_floats()[:2]
    return (x, y, c.rotation.angle)


def interpolate(a, b, t: float) -> tuple:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + angle_diff(b[2], a[2]) * t)


def local_path_free(checker: FloatChecker, a, b, resolution: float) -> bool:
    """Straight-line motion checked at steps of ``resolution`` (angle scaled by the robot radius)."""
    d = max(math.hypot(b[0] - a[0], b[1] - a[1]), abs(angle_diff(b[2], a[2])) * checker.radius)
    n = max(1, math.ceil(d / resolution))
    # midpoint-first order finds collisions sooner
    order = _bisection_order(n)
    return not any(checker.collides(interpolate(a, b, i / n)) for i in order)


def _bisection_order(n: int) -> list:
    out = []
    seen = set()
    step = n
    while step >= 1:
        for i in range(0, n + 1, step):
            if i not in seen:
                seen.add(i)
                out.append(i)
        step //= 2
    for i in range(n + 1):
        if i not in seen:
            out.append(i)
    return out


@dataclass
class Roadmap:
    milestones: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    k: int = 10
    sample_fraction: float = 1.0
    resolution: float = 0.0
    metric: Metric = field(default_factory=Metric)
    cycles: bool = False
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.adj: list = [[] for _ in self.milestones]
        self._parent: list = list(range(len(self.milestones)))

    def find(self, a: int) -> int:
        p = self._parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def add_milestone(self, q) -> int:
        self.milestones.append(tuple(float(v) for v in q))
        self.adj.append([])
        self._parent.append(len(self._parent))
        return len(self.milestones) - 1

    def add_edge(self, i: int, j: int) -> None:
        w = self.metric.distance(self.milestones[i], self.milestones[j])
        self.edges.append((i, j))
        self.adj[i].append((j, w))
        self.adj[j].append((i, w))
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self._parent[ri] = rj

    @property
    def num_components(self) -> int:
        return len({self.find(i) for i in range(len(self.milestones))})

    def nearest(self, q, k: int, exclude: Optional[int] = None) -> list:
        if not self.milestones:
            return []
        pts = np.asarray(self.milestones)
        d = self.metric.distances(pts, q)
        if exclude is not None:
            d[exclude] = np.inf
        k = min(k, len(d))
        idx = np.argpartition(d, k - 1)[:k] if k < len(d) else np.arange(len(d))
        idx = idx[np.argsort(d[idx], kind="stable")]
        return [int(i) for i in idx if np.isfinite(d[i])]


def default_resolution(scene) -> float:
    return FloatChecker(scene).radius / 10


def _connect(rm: Roadmap, checker: FloatChecker, i: int) -> None:
    for j in rm.nearest(rm.milestones[i], rm.k, exclude=i):
        if not rm.cycles and rm.find(i) == rm.find(j):
            continue
        if local_path_free(checker, rm.milestones[i], rm.milestones[j], rm.resolution):
            rm.add_edge(i, j)


def build_roadmap(scene, budget: int, k: int = 10, sample_fraction: float = 0.7, seed: int = 0, resolution: Optional[float] = None, cycles: bool = False, exact: bool = False, metric: Optional[Metric] = None) -> Roadmap:
    """Roadmap from ``budget`` iterations.

    Each iteration either samples a uniform configuration (probability
    ``sample_fraction``) or expands from an existing milestone, picked with
    weight 1/(1 + degree), by a short random bounce. Colliding candidates
    are discarded.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if not 0 < sample_fraction <= 1:
        raise ValueError("sample_fraction must lie in (0, 1]")
    checker = FloatChecker(scene, exact=exact)
    metric = metric or Metric(1.0, checker.radius**2)
    rm = Roadmap(k=k, sample_fraction=sample_fraction, resolution=resolution or checker.radius / 10, metric=metric, cycles=cycles)
    rng = np.random.default_rng(seed)
    xmin, ymin, xmax, ymax = checker.box
    step = 0.1 * max(xmax - xmin, ymax - ymin)
    rejected = 0
    for _ in range(budget):
        if not rm.milestones or rng.random() < sample_fraction:
            q = (rng.uniform(xmin, xmax), rng.uniform(ymin, ymax), rng.uniform(-math.pi, math.pi))
        else:
            deg = np.array([len(a) for a in rm.adj], dtype=float)
            w = 1.0 / (1.0 + deg)
            base = rm.milestones[int(rng.choice(len(w), p=w / w.sum()))]
            q = (
                base[0] + rng.normal(0, step),
                base[1] + rng.normal(0, step),
                angle_diff(base[2] + rng.normal(0, step / checker.radius), 0.0),
            )
            if not local_path_free(checker, base, q, rm.resolution):
                rejected += 1
                continue
        if checker.collides(q):
            rejected += 1
            continue
        i = rm.add_milestone(q)
        _connect(rm, checker, i)
    rm.stats = {"milestones": len(rm.milestones), "edges": len(rm.edges), "rejected": rejected, "checks": checker.checks, "components": rm.num_components}
    return rm


@dataclass
class PRMPath:
    waypoints: list


def prm_query(rm: Roadmap, scene, q_s, q_t) -> Optional[PRMPath]:
    """Shortest roadmap path between two configurations, or None.

    Endpoints may be (x, y, theta) float triples or exact Configurations.
    Raises ValueError("invalid query") when an endpoint collides.
    """
    checker = FloatChecker(scene)
    a = from_configuration(q_s) if isinstance(q_s, Configuration) else tuple(q_s)
    b = from_configuration(q_t) if isinstance(q_t, Configuration) else tuple(q_t)
    if checker.collides(a) or checker.collides(b):
        raise ValueError("invalid query")
    res = rm.resolution or checker.radius / 10
    if local_path_free(checker, a, b, res):
        return PRMPath([a, b])
    sa = [i for i in rm.nearest(a, rm.k) if local_path_free(checker, a, rm.milestones[i], res)]
    sb = [i for i in rm.nearest(b, rm.k) if local_path_free(checker, rm.milestones[i], b, res)]
    if not sa or not sb:
        return None
    starts = {i: rm.metric.distance(a, rm.milestones[i]) for i in sa}
    goals = {i: rm.metric.distance(rm.milestones[i], b) for i in sb}
    dist = dict(starts)
    prev = {i: None for i in starts}
    heap = [(d, i) for i, d in starts.items()]
    heapq.heapify(heap)
    best, best_goal = math.inf, None
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if d >= best:
            break
        if u in goals and d + goals[u] < best:
            best, best_goal = d + goals[u], u
        for v, w in rm.adj[u]:
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    if best_goal is None:
        return None
    chain = []
    n = best_goal
    while n is not None:
        chain.append(rm.milestones[n])
        n = prev[n]
    chain.reverse()
    return PRMPath([a] + chain + [b])


def prm_path_valid(scene, path: PRMPath, resolution: float) -> bool:
    checker = FloatChecker(scene)
    return all(local_path_free(checker, p, q, resolution) for p, q in zip(path.waypoints, path.waypoints[1:]))
