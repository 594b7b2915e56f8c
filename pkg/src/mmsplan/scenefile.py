"""JSON scene, query and result files with exact rational coordinates.

Numbers are written as strings: integers ("3"), ratios ("7/2") or
decimals ("0.25"). Binary floats are accepted on input only for angles.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from gmpy2 import mpq

from .geometry.primitives import Configuration, RationalRotation, rotation_at
from .geometry.scene import Scene


class FileFormatError(ValueError):
    """Bad scene/query file; ``where`` locates the offending entry."""

    def __init__(self, message: str, where: str = "", line: Optional[int] = None):
        self.where = where
        self.line = line
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if where:
            loc.append(where)
        super().__init__(f"{', '.join(loc)}: {message}" if loc else message)


def rational_str(v) -> str:
    v = mpq(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(v, where: str = "") -> mpq:
    if isinstance(v, bool):
        raise FileFormatError(f"expected a number, got {v!r}", where)
    if isinstance(v, int):
        return mpq(v)
    if isinstance(v, str):
        try:
            return mpq(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError):
            raise FileFormatError(f"not an exact number: {v!r}", where) from None
    raise FileFormatError(f"expected an exact number string, got {type(v).__name__}", where)


def _line_of(text: str, key: str) -> Optional[int]:
    """First line mentioning a JSON key (best-effort diagnostics)."""
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(e.msg, line=e.lineno) from None


def _points(raw, where: str) -> list:
    if not isinstance(raw, list) or len(raw) < 3:
        raise FileFormatError("polygon needs at least 3 vertices", where)
    out = []
    for i, p in enumerate(raw):
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise FileFormatError("vertex must be [x, y]", f"{where}[{i}]")
        out.append((parse_rational(p[0], f"{where}[{i}][0]"), parse_rational(p[1], f"{where}[{i}][1]")))
    return out


def scene_from_dict(d: dict, text: str = "") -> Scene:
    for key in ("workspace", "robot"):
        if key not in d:
            raise FileFormatError(f"missing key {key!r}")
    ws = d["workspace"]
    if not isinstance(ws, list) or len(ws) != 4:
        raise FileFormatError("workspace must be [xmin, ymin, xmax, ymax]", "workspace", _line_of(text, "workspace"))
    box = [parse_rational(v, f"workspace[{i}]") for i, v in enumerate(ws)]
    robot = _points(d["robot"], "robot")
    obstacles = [_points(o, f"obstacles[{i}]") for i, o in enumerate(d.get("obstacles", []))]
    try:
        Scene(box, robot)
    except ValueError as e:
        raise FileFormatError(str(e), "robot", _line_of(text, "robot")) from None
    for i, o in enumerate(obstacles):
        try:
            Scene(box, robot, [o])
        except ValueError as e:
            raise FileFormatError(str(e), f"obstacles[{i}]", _line_of(text, "obstacles")) from None
    return Scene(box, robot, obstacles, name=d.get("name", ""))


def scene_to_dict(scene: Scene) -> dict:
    pts = lambda poly: [[rational_str(x), rational_str(y)] for x, y in poly]
    return {
        "name": scene.name,
        "workspace": [rational_str(v) for v in scene.workspace],
        "robot": pts(scene.robot),
        "obstacles": [pts(o) for o in scene.obstacles],
    }


def load_scene(path) -> Scene:
    with open(path) as fh:
        text = fh.read()
    d = _load(text)
    if not isinstance(d, dict):
        raise FileFormatError("scene file must hold a JSON object", line=1)
    return scene_from_dict(d, text)


def dump_scene(scene: Scene, path) -> None:
    with open(path, "w") as fh:
        json.dump(scene_to_dict(scene), fh, indent=1)
        fh.write("\n")


def scenes_equal(a: Scene, b: Scene) -> bool:
    return a.workspace == b.workspace and a.robot == b.robot and a.obstacles == b.obstacles


# configurations


def config_to_dict(q: Configuration) -> dict:
    r = q.rotation
    return {
        "x": rational_str(q.position[0]),
        "y": rational_str(q.position[1]),
        "tau": "inf" if r.tau is None else rational_str(r.tau),
        "theta": round(r.angle, 12),
    }


def config_from_dict(d: dict, where: str = "", angle_epsilon=mpq(1, 10**9)) -> Configuration:
    if not isinstance(d, dict):
        raise FileFormatError("configuration must be an object", where)
    x = parse_rational(d.get("x"), f"{where}.x")
    y = parse_rational(d.get("y"), f"{where}.y")
    if "tau" in d:
        if d["tau"] == "inf":
            rot = RationalRotation.half_turn()
        else:
            rot = RationalRotation.from_tau(parse_rational(d["tau"], f"{where}.tau"))
    elif "theta" in d:
        th = d["theta"]
        try:
            th = float(th)
        except (TypeError, ValueError):
            raise FileFormatError(f"bad angle {th!r}", f"{where}.theta") from None
        rot = rotation_at(th, angle_epsilon)
    else:
        rot = RationalRotation.identity()
    return Configuration((x, y), rot)


@dataclass
class Query:
    source: Configuration
    target: Configuration


def load_query(path) -> Query:
    with open(path) as fh:
        text = fh.read()
    d = _load(text)
    if not isinstance(d, dict):
        raise FileFormatError("query file must hold a JSON object", line=1)
    for key in ("source", "target"):
        if key not in d:
            raise FileFormatError(f"missing key {key!r}")
    return Query(config_from_dict(d["source"], "source"), config_from_dict(d["target"], "target"))


def query_to_dict(q: Query) -> dict:
    return {"source": config_to_dict(q.source), "target": config_to_dict(q.target)}


def dump_query(q: Query, path) -> None:
    with open(path, "w") as fh:
        json.dump(query_to_dict(q), fh, indent=1)
        fh.write("\n")
