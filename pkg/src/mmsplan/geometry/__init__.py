from .primitives import (
    Configuration,
    Point,
    RationalRotation,
    normalize_polygon,
    place,
    place_tau,
    point_in_polygon,
    pt,
    rational_angle,
    rotation_at,
    rotation_from_sincos,
)
from .polygons import PolygonSet, collides, convex_decomposition, minkowski_sum
from .scene import Scene
from .segment_arrangement import SegmentArrangement
from .visibility import segment_inside, visibility_shortest_path

__all__ = [
    "Configuration",
    "Point",
    "PolygonSet",
    "RationalRotation",
    "Scene",
    "SegmentArrangement",
    "collides",
    "convex_decomposition",
    "minkowski_sum",
    "normalize_polygon",
    "place",
    "place_tau",
    "point_in_polygon",
    "pt",
    "rational_angle",
    "rotation_at",
    "rotation_from_sincos",
    "segment_inside",
    "visibility_shortest_path",
]
