"""Connectivity graph over free cells of sampled layers and slabs, and queries."""
from __future__ import annotations

import math
import time
from fractions import Fraction
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from gmpy2 import mpq

from .geometry.polygons import collides
from .geometry.primitives import Configuration, Point, RationalRotation, rotation_at
from .geometry.visibility import visibility_shortest_path
from .manifolds import (
    Manifold,
    SegmentConstraint,
    angle_primitive,
    intersect_layer_segment,
    segment_alpha_intervals,
    segment_constraint_around,
    segment_primitive,
)

GRID = 1 << 20


@dataclass
class PlannerParams:
    n_theta: int = 8
    n_segments: int = 20
    random_threshold: float = 0.2
    small_cell_size: float = 0.002
    large_cell_size: float = 0.05
    roi_min: Optional[float] = None  # half-width; default 1.25 layer spacings
    roi_max: float = 0.49 * math.pi
    seed: int = 0
    angle_offset: float = 0.0123
    random_layers: bool = False
    query_segments: int = 6
    stop_when_connected: bool = True
    angle_epsilon: float = 1e-9
    filtering: bool = True  # discard segments that cannot merge components
    heuristic: bool = True  # False: every segment comes from the random procedure
    roi_full: bool = False  # always use the widest RoI

    def __post_init__(self):
        if self.n_theta < 2:
            raise ValueError("n_theta must be >= 2")
        if not self.small_cell_size < self.large_cell_size:
            raise ValueError("small_cell_size must be < large_cell_size")
        if not 0 <= self.random_threshold <= 1:
            raise ValueError("random_threshold must lie in [0, 1]")
        if self.n_segments < 0:
            raise ValueError("n_segments must be >= 0")

    @property
    def roi_bounds(self) -> tuple:
        hi = min(self.roi_max, 0.49 * math.pi)
        lo = self.roi_min if self.roi_min is not None else 1.25 * 2 * math.pi / self.n_theta
        return min(lo, hi), hi


@dataclass
class Edge:
    u: int
    v: int
    witness: Configuration


class ConnectivityGraph:
    """Nodes are (manifold id, cell index); edges join intersecting cells."""

    def __init__(self, scene):
        self.scene = scene
        self.manifolds: dict = {}
        self.layers: list = []  # manifold ids
        self.slabs: list = []
        self.nodes: list = []
        self.node_of: dict = {}
        self.edges: list = []
        self.adj: list = []
        self._parent: list = []
        self._layer_by_rot: dict = {}
        self.index_of: dict = {}  # manifold id -> insertion order
        self.stats = {
            "generated": 0,
            "filtered": 0,
            "slabs": 0,
            "query_slabs": 0,
            "branches": {"random": 0, "large": 0, "small": 0},
            "time_layers": 0.0,
            "time_slabs": 0.0,
        }

    # union-find
    def find(self, a: int) -> int:
        p = self._parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def _union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self._parent[ra] = rb
        return True

    def component(self, node: int) -> int:
        return self.find(node)

    @property
    def num_components(self) -> int:
        return len({self.find(i) for i in range(len(self.nodes))})

    def layer_nodes(self) -> list:
        return [self.node_of[(m, i)] for m in self.layers for i in range(len(self.manifolds[m].fscs))]

    def layer_for(self, rot: RationalRotation) -> Optional[Manifold]:
        mid = self._layer_by_rot.get((rot.sin, rot.cos))
        return None if mid is None else self.manifolds[mid]

    def add_nodes(self, m: Manifold) -> None:
        self.manifolds[m.id] = m
        self.index_of[m.id] = len(self.index_of)
        if m.kind == "layer":
            self.layers.append(m.id)
            self.layers.sort(key=lambda i: _angle_key(self.manifolds[i].rotation))
            self._layer_by_rot[(m.rotation.sin, m.rotation.cos)] = m.id
        else:
            self.slabs.append(m.id)
        for i in range(len(m.fscs)):
            self.node_of[(m.id, i)] = len(self.nodes)
            self.nodes.append((m.id, i))
            self.adj.append([])
            self._parent.append(len(self._parent))

    def add_edge(self, u: int, v: int, witness: Configuration) -> None:
        self.edges.append(Edge(u, v, witness))
        k = len(self.edges) - 1
        self.adj[u].append((v, k))
        self.adj[v].append((u, k))
        self._union(u, v)

    def next_layer(self, mid: int, step: int = 1) -> Manifold:
        i = self.layers.index(mid)
        return self.manifolds[self.layers[(i + step) % len(self.layers)]]

    def recompute_components(self) -> dict:
        """Components from the edge list alone (for auditing the union-find)."""
        parent = list(range(len(self.nodes)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            ra, rb = find(e.u), find(e.v)
            if ra != rb:
                parent[ra] = rb
        return {i: find(i) for i in range(len(self.nodes))}


def _angle_key(rot: RationalRotation) -> float:
    a = rot.angle
    return a if a >= 0 else a + 2 * math.pi


# ---------------------------------------------------------------------------
# construction


def add_manifold(graph: ConnectivityGraph, m: Manifold) -> int:
    """Insert the cells of m and every layer/slab edge they create; returns new edges."""
    graph.add_nodes(m)
    before = len(graph.edges)
    if m.kind == "slab":
        pairs = [(graph.manifolds[l], m) for l in graph.layers]
    else:
        pairs = [(m, graph.manifolds[s]) for s in graph.slabs]
    for layer, slab in pairs:
        seen = set()
        for li, si, q in intersect_layer_segment(layer, slab):
            if (li, si) in seen:
                continue
            seen.add((li, si))
            graph.add_edge(graph.node_of[(layer.id, li)], graph.node_of[(slab.id, si)], q)
    return len(graph.edges) - before


def layer_angles(params: PlannerParams, rng) -> list:
    if params.random_layers:
        return sorted(float(a) for a in rng.uniform(-math.pi, math.pi, params.n_theta))
    return [math.remainder(2 * math.pi * j / params.n_theta + params.angle_offset, 2 * math.pi) for j in range(params.n_theta)]


def _rand_rational(rng, lo, hi) -> mpq:
    return lo + (hi - lo) * mpq(int(rng.integers(0, GRID + 1)), GRID)


def random_point_in_cell(cell, rng, tries: int = 400) -> Point:
    xs = [p[0] for p in cell.outer]
    ys = [p[1] for p in cell.outer]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    for _ in range(tries):
        p = (_rand_rational(rng, x0, x1), _rand_rational(rng, y0, y1))
        if cell.contains(p) == 1:
            return p
    return cell.sample


def choose_branch(graph: ConnectivityGraph, params: PlannerParams, rng) -> tuple:
    """Branch of segment generation: ("random", None) or (kind, (layer, cell))."""
    if not params.heuristic or rng.random() >= params.random_threshold:
        return "random", None
    cands = [(m, i) for m in graph.layers for i in range(len(graph.manifolds[m].fscs))]
    if not cands:
        return "random", None
    mid, i = cands[int(rng.integers(0, len(cands)))]
    size = graph.manifolds[mid].sizes[i]
    alpha = (size - params.small_cell_size) / (params.large_cell_size - params.small_cell_size)
    alpha = min(max(alpha, 0.0), 1.0)
    if rng.random() >= alpha:
        return "small", (mid, i, alpha)
    return "large", (mid, i, alpha)


def generate_constraint(graph: ConnectivityGraph, params: PlannerParams, rng) -> SegmentConstraint:
    branch, info = choose_branch(graph, params, rng)
    lo_w, hi_w = params.roi_bounds
    xmin, ymin, xmax, ymax = graph.scene.workspace
    if branch == "random":
        graph.stats["branches"]["random"] += 1
        while True:
            s = (_rand_rational(rng, xmin, xmax), _rand_rational(rng, ymin, ymax))
            t = (_rand_rational(rng, xmin, xmax), _rand_rational(rng, ymin, ymax))
            if s != t:
                break
        center = float(rng.uniform(-math.pi, math.pi))
        return segment_constraint_around(s, t, center, hi_w)
    mid, i, alpha = info
    layer = graph.manifolds[mid]
    cell = layer.fscs[i]
    width = hi_w if params.roi_full else lo_w + (hi_w - lo_w) * alpha
    center = layer.rotation.angle
    s = random_point_in_cell(cell, rng)
    t = None
    if branch == "small":
        nxt = graph.next_layer(mid, 1 if rng.random() < 0.5 else -1)
        for _ in range(200):
            p = random_point_in_cell(cell, rng, tries=50)
            if any(c.contains(p) == 1 for c in nxt.fscs):
                t = p
                break
        if t is None:
            branch = "large"
    if branch == "large":
        for _ in range(20):
            t = random_point_in_cell(cell, rng)
            if t != s:
                break
    if t is None or t == s:
        t = (s[0] + (xmax - xmin) / 64, s[1])
    graph.stats["branches"][branch] += 1
    return segment_constraint_around(s, t, center, width)


def filter_segment(c: SegmentConstraint, graph: ConnectivityGraph) -> bool:
    """True to keep: the layer cells the slab could touch span >= 2 components."""
    comps = set()
    for mid in graph.layers:
        layer = graph.manifolds[mid]
        if not c.contains_rotation(layer.rotation):
            continue
        for i, cell in enumerate(layer.fscs):
            if segment_alpha_intervals(cell, c.s, c.t):
                comps.add(graph.find(graph.node_of[(mid, i)]))
                if len(comps) > 1:
                    return True
    return False


def _layers_connected(graph: ConnectivityGraph) -> bool:
    nodes = graph.layer_nodes()
    return len({graph.find(n) for n in nodes}) <= 1


def construct_connectivity_graph(scene, params: PlannerParams, rng=None, on_discard=None) -> ConnectivityGraph:
    """Exploration with evenly spaced layers, then filtered segment constraints.

    ``on_discard(constraint, graph)`` is called for every filtered-out
    constraint, before the graph changes again.
    """
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    g = ConnectivityGraph(scene)
    t0 = time.perf_counter()
    for th in layer_angles(params, rng):
        rot = rotation_at(th, _eps(params))
        if g.layer_for(rot) is None:
            add_manifold(g, angle_primitive(scene, rot))
    g.stats["time_layers"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    for _ in range(params.n_segments):
        if params.stop_when_connected and _layers_connected(g):
            break
        c = generate_constraint(g, params, rng)
        g.stats["generated"] += 1
        if params.filtering and not filter_segment(c, g):
            g.stats["filtered"] += 1
            if on_discard is not None:
                on_discard(c, g)
            continue
        add_manifold(g, segment_primitive(scene, c))
        g.stats["slabs"] += 1
    g.stats["time_slabs"] = time.perf_counter() - t0
    return g


def _eps(params: PlannerParams) -> mpq:
    return mpq(Fraction(params.angle_epsilon).limit_denominator(10**15))


# ---------------------------------------------------------------------------
# queries and paths


@dataclass
class Leg:
    """Piece of a path inside one cell.

    ``kind`` is "layer" (translation at a fixed orientation; ``params`` are
    positions) or "slab" (``params`` are (tau, alpha) pairs of
    ``constraint``).
    """

    kind: str
    manifold: Optional[int]  # insertion index in the graph
    cell: Optional[int]
    params: list
    rotation: Optional[RationalRotation] = None
    constraint: Optional[SegmentConstraint] = None

    def configuration(self, p) -> Configuration:
        if self.kind == "layer":
            return Configuration(p, self.rotation)
        return self.constraint.configuration(p[0], p[1])

    @property
    def waypoints(self) -> list:
        return [self.configuration(p) for p in self.params]


@dataclass
class Path:
    legs: list = field(default_factory=list)

    @property
    def waypoints(self) -> list:
        out = []
        for leg in self.legs:
            w = leg.waypoints
            if out and w and out[-1] == w[0]:
                w = w[1:]
            out.extend(w)
        return out


@dataclass
class Validation:
    ok: bool
    checked: int
    violation: Optional[str] = None


def _cell_of_position(layer: Manifold, pos: Point) -> Optional[int]:
    for i, cell in enumerate(layer.fscs):
        if cell.contains(pos) == 1:
            return i
    for i, cell in enumerate(layer.fscs):
        if cell.contains(pos) == 0:
            return i
    return None


def _ensure_layer(graph: ConnectivityGraph, rot: RationalRotation) -> Manifold:
    m = graph.layer_for(rot)
    if m is None:
        m = angle_primitive(graph.scene, rot)
        add_manifold(graph, m)
    return m


def _bfs(graph: ConnectivityGraph, src: int, dst: int) -> Optional[list]:
    prev = {src: None}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        if u == dst:
            break
        for v, k in graph.adj[u]:
            if v not in prev:
                prev[v] = (u, k)
                dq.append(v)
    if dst not in prev:
        return None
    out = []
    n = dst
    while prev[n] is not None:
        u, k = prev[n]
        out.append((u, n, k))
        n = u
    out.reverse()
    return out


def _alpha_on(c: SegmentConstraint, pos: Point) -> mpq:
    d = c.direction
    return ((pos[0] - c.s[0]) * d[0] + (pos[1] - c.s[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1])


def query(graph: ConnectivityGraph, scene, q_s: Configuration, q_t: Configuration, rng=None, params: Optional[PlannerParams] = None) -> Optional[Path]:
    """Path from q_s to q_t, or None when the graph does not connect them.

    Raises ValueError("invalid query") when an endpoint collides.
    """
    if collides(scene, q_s) or collides(scene, q_t):
        raise ValueError("invalid query")
    params = params or PlannerParams()
    rng = rng if rng is not None else np.random.default_rng(params.seed + 7919)
    ls = _ensure_layer(graph, q_s.rotation)
    lt = _ensure_layer(graph, q_t.rotation)
    cs = _cell_of_position(ls, q_s.position)
    ct = _cell_of_position(lt, q_t.position)
    if cs is None or ct is None:
        return None
    ns = graph.node_of[(ls.id, cs)]
    nt = graph.node_of[(lt.id, ct)]
    _, hi_w = params.roi_bounds
    tries = 0
    while graph.find(ns) != graph.find(nt) and tries < params.query_segments:
        # extra slabs anchored at the query positions
        which = tries % 2
        layer, cell_i, q = (ls, cs, q_s) if which == 0 else (lt, ct, q_t)
        target = random_point_in_cell(layer.fscs[cell_i], rng)
        if target == q.position:
            target = layer.fscs[cell_i].sample
        tries += 1
        if target == q.position:
            continue
        c = segment_constraint_around(q.position, target, q.rotation.angle, hi_w)
        add_manifold(graph, segment_primitive(scene, c))
        graph.stats["query_slabs"] += 1
    hops = _bfs(graph, ns, nt)
    if hops is None:
        return None
    path = Path()
    cur = q_s
    for u, v, k in hops:
        w = graph.edges[k].witness
        path.legs.append(_local_leg(graph, u, cur, w))
        cur = w
    path.legs.append(_local_leg(graph, nt, cur, q_t))
    return path


def _local_leg(graph: ConnectivityGraph, node: int, a: Configuration, b: Configuration) -> Leg:
    mid, i = graph.nodes[node]
    m = graph.manifolds[mid]
    if m.kind == "layer":
        cell = m.fscs[i]
        pts = visibility_shortest_path((cell.outer, cell.holes), a.position, b.position)
        return Leg("layer", graph.index_of[mid], i, pts, rotation=m.rotation)
    c = m.constraint
    pa = (a.rotation.tau_in_chart(c.chart), _alpha_on(c, a.position))
    pb = (b.rotation.tau_in_chart(c.chart), _alpha_on(c, b.position))
    face = m.fscs[i]
    pts = [pa] if pa == pb else m.arrangement.face_path(face, pa, pb)
    pts = [p for k, p in enumerate(pts) if k == 0 or p != pts[k - 1]]
    return Leg("slab", graph.index_of[mid], i, pts, constraint=c)


def path_validate(scene, path: Path, samples_per_leg: int = 16) -> Validation:
    """Exact collision checks at rational points along every leg.

    Each leg gets at least ``samples_per_leg`` checks spread evenly over its
    pieces, which are straight in the leg's own parameters.
    """
    checked = 0
    prev_end = None
    for li, leg in enumerate(path.legs):
        if not leg.params:
            return Validation(False, checked, f"leg {li} is empty")
        first = leg.configuration(leg.params[0])
        if prev_end is not None and first != prev_end:
            return Validation(False, checked, f"leg {li} does not start where leg {li - 1} ends")
        pieces = list(zip(leg.params, leg.params[1:])) or [(leg.params[0], leg.params[0])]
        per_piece = max(1, -(-samples_per_leg // len(pieces)))
        for pi, (p, q) in enumerate(pieces):
            for j in range(per_piece + 1):
                t = mpq(j, per_piece)
                x = tuple(a + (b - a) * t for a, b in zip(p, q))
                checked += 1
                if collides(scene, leg.configuration(x)):
                    return Validation(False, checked, f"collision on leg {li}, piece {pi}, t={t}")
        prev_end = leg.configuration(leg.params[-1])
    return Validation(True, checked)
