"""Scene container: workspace box, robot polygon and obstacle polygons."""
from __future__ import annotations

from functools import cached_property
from typing import Sequence

from ..numeric import Q
from .primitives import Point, bbox, normalize_polygon
from .polygons import convex_decomposition


class Scene:
    """Robot given in its own frame (reference point at the origin).

    Polygons are normalized on construction; non-simple input raises
    ValueError.
    """

    def __init__(self, workspace: Sequence, robot: Sequence[Point], obstacles: Sequence[Sequence[Point]] = (), name: str = ""):
        xmin, ymin, xmax, ymax = (Q(v) for v in workspace)
        if not (xmin < xmax and ymin < ymax):
            raise ValueError("workspace box is empty")
        self.workspace = (xmin, ymin, xmax, ymax)
        self.robot = normalize_polygon(robot)
        self.obstacles = [normalize_polygon(o) for o in obstacles]
        self.name = name

    @cached_property
    def robot_pieces(self) -> list:
        return convex_decomposition(self.robot)

    @cached_property
    def obstacle_pieces(self) -> list:
        return [p for o in self.obstacles for p in convex_decomposition(o)]

    @cached_property
    def obstacle_piece_boxes(self) -> list:
        return [bbox(p) for p in self.obstacle_pieces]

    @cached_property
    def robot_radius(self) -> float:
        """Largest distance from the reference point to a robot vertex."""
        return max((float(x) ** 2 + float(y) ** 2) ** 0.5 for x, y in self.robot)

    @cached_property
    def workspace_edges(self) -> list:
        xmin, ymin, xmax, ymax = self.workspace
        c = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]
        return [(c[i], c[(i + 1) % 4]) for i in range(4)]

    @property
    def feature_count(self) -> int:
        return len(self.robot) + sum(len(o) for o in self.obstacles)

    def __repr__(self) -> str:
        return f"Scene({self.name!r}, robot={len(self.robot)} vertices, obstacles={len(self.obstacles)})"
