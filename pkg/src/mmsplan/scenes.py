"""Built-in test scenes with a default query each."""
from __future__ import annotations

import math

from gmpy2 import mpq

from .geometry.primitives import Configuration, rotation_at
from .geometry.scene import Scene
from .scenefile import Query


def _q(v) -> mpq:
    return mpq(v)


def _rect(x0, y0, x1, y1) -> list:
    x0, y0, x1, y1 = map(_q, (x0, y0, x1, y1))
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def _poly(*pts) -> list:
    return [(_q(x), _q(y)) for x, y in pts]


def _conf(x, y, theta) -> Configuration:
    return Configuration((_q(x), _q(y)), rotation_at(theta))


def empty() -> tuple:
    scene = Scene((0, 0, 10, 10), _poly((-1, "-1/2"), (1, "-1/2"), (0, 1)), [], name="empty")
    return scene, Query(_conf(2, 2, 0.0), _conf(8, 7, 2.0))


def wall_split() -> tuple:
    scene = Scene((0, 0, 10, 10), _rect("-1/2", "-1/4", "1/2", "1/4"), [_rect(4, 0, 6, 10)], name="wall-split")
    return scene, Query(_conf(2, 5, 0.0), _conf(8, 5, 0.0))


TUNNEL_GAP = mpq(4, 5)


def tunnel(scale=1) -> tuple:
    """A rectangle has to line up with a horizontal tunnel through a thick wall.

    The robot is 3 x 1/2 at scale 1; the tunnel is 4/5 high and 2 long.
    """
    s = _q(scale)
    robot = _rect(-3 * s / 2, -s / 4, 3 * s / 2, s / 4)
    half = TUNNEL_GAP / 2
    obstacles = [_rect(9, 0, 11, 5 - half), _rect(9, 5 + half, 11, 10)]
    scene = Scene((0, 0, 20, 10), robot, obstacles, name=f"tunnel-{rational_label(s)}")
    return scene, Query(_conf(4, 5, math.pi / 2), _conf(16, 5, -math.pi / 2))


def tunnel_tightness(scale) -> float:
    """Robot width over tunnel height."""
    return float(_q(scale) / 2 / TUNNEL_GAP)


def snake() -> tuple:
    """Serpentine corridor through two staggered walls."""
    robot = _rect(-1, "-3/20", 1, "3/20")
    obstacles = [_rect(0, 4, 8, "9/2"), _rect(4, "15/2", 12, 8), _poly((5, 1), (7, 1), (6, 2))]
    scene = Scene((0, 0, 12, 12), robot, obstacles, name="snake")
    return scene, Query(_conf(2, 2, 0.0), _conf(10, 10, 0.0))


def flower() -> tuple:
    """Four petal channels around a central room; the bar must turn in the room."""
    robot = _rect("-3/2", "-1/5", "3/2", "1/5")
    obstacles = [
        _poly((0, 0), (5, 0), (5, 3), (3, 5), (0, 5)),
        _poly((7, 0), (12, 0), (12, 5), (9, 5), (7, 3)),
        _poly((9, 7), (12, 7), (12, 12), (7, 12), (7, 9)),
        _poly((0, 7), (3, 7), (5, 9), (5, 12), (0, 12)),
    ]
    scene = Scene((0, 0, 12, 12), robot, obstacles, name="flower")
    return scene, Query(_conf("9/5", 6, 0.0), _conf(6, "51/5", math.pi / 2))


def rational_label(v) -> str:
    v = mpq(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}_{v.denominator}"


SCENES = {
    "empty": empty,
    "wall-split": wall_split,
    "tunnel": tunnel,
    "snake": snake,
    "flower": flower,
}

# robot scale factors of the tightness sweep; tightness = scale * 5/8
TIGHTNESS_SCALES = ("4/5", "1", "6/5", "7/5", "38/25")


def get(name: str) -> tuple:
    try:
        return SCENES[name]()
    except KeyError:
        raise KeyError(f"unknown scene {name!r}; choose from {sorted(SCENES)}") from None
