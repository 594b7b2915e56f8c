"""Random scenes and constraints, and graph audits shared by the test modules."""
import math
from fractions import Fraction

from gmpy2 import mpq

from mmsplan.geometry import Scene, normalize_polygon, pt
from mmsplan.manifolds import SegmentConstraint, intersect_layer_segment


def square(x0, y0, x1, y1):
    return [pt(x0, y0), pt(x1, y0), pt(x1, y1), pt(x0, y1)]


def random_star(rnd, n, cx=0, cy=0, r0=1, r1=3):
    """Simple star-shaped polygon with rational vertices."""
    angles = [2 * math.pi * (k + rnd.uniform(0.1, 0.9)) / n for k in range(n)]
    pts = []
    for a in angles:
        r = rnd.uniform(r0, r1)
        pts.append((mpq(Fraction(cx + r * math.cos(a)).limit_denominator(64)), mpq(Fraction(cy + r * math.sin(a)).limit_denominator(64))))
    return normalize_polygon(pts)


def random_scene(rnd, n_obstacles=3, robot_vertices=4):
    robot = random_star(rnd, robot_vertices, r0=0.3, r1=1.2)
    obstacles = [
        random_star(rnd, rnd.randint(3, 6), cx=rnd.uniform(2, 8), cy=rnd.uniform(2, 8), r0=0.5, r1=1.5)
        for _ in range(n_obstacles)
    ]
    return Scene((0, 0, 10, 10), robot, obstacles)


def random_rational(rnd, lo, hi, den=1000):
    return mpq(rnd.randint(int(lo * den), int(hi * den)), den)


def random_constraint(rnd, chart="A"):
    while True:
        s = (random_rational(rnd, 0.5, 9.5, 100), random_rational(rnd, 0.5, 9.5, 100))
        t = (random_rational(rnd, 0.5, 9.5, 100), random_rational(rnd, 0.5, 9.5, 100))
        if s != t:
            break
    lo = random_rational(rnd, -1, 0.5, 100)
    hi = lo + random_rational(rnd, 0.1, 0.5, 100)
    return SegmentConstraint(s, t, lo, hi, chart)


def merges_if_added(g, slab):
    """Whether inserting the slab would join two existing components."""
    for si in range(len(slab.fscs)):
        comps = set()
        for lid in g.layers:
            for li, sj, _ in intersect_layer_segment(g.manifolds[lid], slab):
                if sj == si:
                    comps.add(g.find(g.node_of[(lid, li)]))
        if len(comps) > 1:
            return True
    return False
