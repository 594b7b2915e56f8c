"""Deterministic SVG output for layers, slabs, paths and layer atlases.

Coordinates are printed with a fixed number of decimals so identical input
gives byte-identical documents.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .arrangement import TOP, BOTTOM
from .geometry.primitives import place
from .numeric import to_float

OBSTACLE = "#3465a4"
FREE = "#d3d7cf"
FREE_SLAB = "#888a85"
SOURCE = "#4e9a06"
TARGET = "#cc0000"
CURVE = "#2e3436"
PATH = "#f57900"
PALETTE = ("#fce94f", "#8ae234", "#fcaf3e", "#729fcf", "#ad7fa8", "#e9b96e", "#ef2929", "#babdb6")


def _f(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class Canvas:
    """World box mapped onto a fixed-width picture with y pointing up."""

    def __init__(self, xmin, ymin, xmax, ymax, width: int = 600, margin: int = 10):
        self.x0, self.y0 = float(xmin), float(ymin)
        w, h = float(xmax) - self.x0, float(ymax) - self.y0
        self.scale = (width - 2 * margin) / w
        self.margin = margin
        self.width = width
        self.height = int(round(h * self.scale)) + 2 * margin
        self.h = h
        self.items: list = []

    def xy(self, x, y) -> tuple:
        return (self.margin + (float(x) - self.x0) * self.scale, self.margin + (self.h - (float(y) - self.y0)) * self.scale)

    def polygon(self, pts, fill: str, stroke: str = "none", opacity: float = 1.0, holes=()) -> None:
        rings = [pts, *holes]
        d = " ".join("M" + " L".join(f"{_f(a)},{_f(b)}" for a, b in (self.xy(*p) for p in ring)) + " Z" for ring in rings if ring)
        op = "" if opacity == 1.0 else f' fill-opacity="{_f(opacity)}"'
        self.items.append(f'<path d="{d}" fill="{fill}" fill-rule="evenodd" stroke="{stroke}" stroke-width="1"{op}/>')

    def polyline(self, pts, stroke: str, width: float = 1.5) -> None:
        s = " ".join(f"{_f(a)},{_f(b)}" for a, b in (self.xy(*p) for p in pts))
        self.items.append(f'<polyline points="{s}" fill="none" stroke="{stroke}" stroke-width="{_f(width)}"/>')

    def circle(self, p, r: float, fill: str) -> None:
        a, b = self.xy(*p)
        self.items.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="{_f(r)}" fill="{fill}"/>')

    def text(self, p, s: str) -> None:
        a, b = self.xy(*p)
        self.items.append(f'<text x="{_f(a)}" y="{_f(b)}" font-size="12" font-family="monospace">{escape(s)}</text>')

    def document(self, title: str = "") -> str:
        head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        t = f"<title>{escape(title)}</title>" if title else ""
        return "\n".join([head, t, '<rect width="100%" height="100%" fill="white"/>', *self.items, "</svg>"]) + "\n"


def _workspace(scene, width=600) -> Canvas:
    cv = Canvas(*scene.workspace, width=width)
    xmin, ymin, xmax, ymax = scene.workspace
    cv.polygon([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)], "white", stroke="black")
    return cv


def _obstacles(cv: Canvas, scene) -> None:
    for o in scene.obstacles:
        cv.polygon(o, OBSTACLE)


def _robot(cv: Canvas, scene, q, color: str) -> None:
    cv.polygon(place(scene.robot, q), color, stroke=color, opacity=0.5)
    cv.circle(q.position, 2.5, color)


def render_layer(scene, layer, source=None, target=None, fill=None) -> str:
    cv = _workspace(scene)
    for i, cell in enumerate(layer.fscs):
        cv.polygon(cell.outer, fill[i] if fill else FREE, holes=cell.holes)
    _obstacles(cv, scene)
    if source is not None:
        _robot(cv, scene, source, SOURCE)
    if target is not None:
        _robot(cv, scene, target, TARGET)
    return cv.document(f"layer theta={layer.rotation.angle:.6f}")


def _bound_points(arr, bnd: int, xs) -> list:
    if bnd == BOTTOM:
        return [(x, float(arr.box.ylo)) for x in xs]
    if bnd == TOP:
        return [(x, float(arr.box.yhi)) for x in xs]
    f = arr.pieces[bnd].curve
    return [(x, _eval(f, x)) for x in xs]


def _horner(p, x: float) -> float:
    v = 0.0
    for c in reversed(p):
        v = v * x + float(c)
    return v


def _eval(f, x: float) -> float:
    d = _horner(f.den, x)
    return _horner(f.num, x) / d if d else math.inf


def _clamp_y(pts, lo, hi) -> list:
    return [(x, min(max(y, lo), hi)) for x, y in pts]


def render_slab(slab, samples: int = 24) -> str:
    """Free faces shaded, critical curves stroked, in (tau, alpha) coordinates."""
    arr = slab.arrangement
    box = arr.box
    cv = Canvas(box.xlo, box.ylo, box.xhi, box.yhi, width=600)
    cv.polygon([(box.xlo, box.ylo), (box.xhi, box.ylo), (box.xhi, box.yhi), (box.xlo, box.yhi)], "white", stroke="black")
    ylo, yhi = float(box.ylo), float(box.yhi)
    free = set(slab.fscs)
    for t, face in enumerate(arr.trap_face):
        if face not in free:
            continue
        k, _ = arr.trap_slab(t)
        a, b = to_float(arr.events[k]), to_float(arr.events[k + 1])
        xs = [a + (b - a) * i / samples for i in range(samples + 1)]
        lo, hi = arr.trap_bounds(t)
        bottom = _clamp_y(_bound_points(arr, lo, xs), ylo, yhi)
        top = _clamp_y(_bound_points(arr, hi, xs), ylo, yhi)
        cv.polygon(bottom + top[::-1], FREE_SLAB)
    for p in arr.pieces:
        a, b = to_float(p.a), to_float(p.b)
        xs = [a + (b - a) * i / (4 * samples) for i in range(4 * samples + 1)]
        pts = [(x, _eval(p.curve, x)) for x in xs]
        cv.polyline(_clamp_y(pts, ylo, yhi), CURVE, 1.0)
    for k, wall in enumerate(arr.is_wall):
        if wall:
            x = to_float(arr.events[k])
            cv.polyline([(x, ylo), (x, yhi)], CURVE, 1.0)
    return cv.document("slab")


def render_path(scene, path, source=None, target=None, frames: int = 40) -> str:
    """Reference-point trace plus robot outlines at evenly spread waypoints."""
    cv = _workspace(scene)
    _obstacles(cv, scene)
    wps = path.waypoints if path is not None else []
    if wps:
        step = max(1, len(wps) // frames)
        for q in wps[::step]:
            cv.polygon(place(scene.robot, q), "none", stroke=PATH)
        cv.polyline([q.position for q in wps], PATH, 2.0)
    if source is not None:
        _robot(cv, scene, source, SOURCE)
    if target is not None:
        _robot(cv, scene, target, TARGET)
    return cv.document("path")


def render_graph(graph, columns: int = 4, width: int = 300) -> str:
    """Atlas of all layers; cells coloured by connected component."""
    scene = graph.scene
    layers = [graph.manifolds[m] for m in graph.layers]
    comp_ids = {}
    for n in range(len(graph.nodes)):
        comp_ids.setdefault(graph.find(n), len(comp_ids))
    panels = []
    for layer in layers:
        colors = [PALETTE[comp_ids[graph.find(graph.node_of[(layer.id, i)])] % len(PALETTE)] for i in range(len(layer.fscs))]
        cv = _workspace(scene, width=width)
        for i, cell in enumerate(layer.fscs):
            cv.polygon(cell.outer, colors[i], holes=cell.holes)
        _obstacles(cv, scene)
        cv.text((scene.workspace[0], scene.workspace[3]), f"{math.degrees(layer.rotation.angle):.1f} deg")
        panels.append(cv)
    if not panels:
        return _workspace(scene, width).document("graph")
    ph = panels[0].height
    rows = -(-len(panels) // columns)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{columns * width}" height="{rows * ph}" viewBox="0 0 {columns * width} {rows * ph}">', "<title>layer atlas</title>"]
    for i, cv in enumerate(panels):
        r, c = divmod(i, columns)
        out.append(f'<g transform="translate({c * width},{r * ph})">')
        out.append('<rect width="100%" height="100%" fill="white"/>' if i == 0 else "")
        out.extend(cv.items)
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(x for x in out if x) + "\n"
