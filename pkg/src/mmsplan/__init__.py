"""Exact motion planning for a polygonal robot among polygonal obstacles."""
from .geometry import Configuration, RationalRotation, Scene, collides, rotation_at
from .planner import ConnectivityGraph, Path, PlannerParams, construct_connectivity_graph, path_validate, query

__all__ = [
    "Configuration",
    "ConnectivityGraph",
    "Path",
    "PlannerParams",
    "RationalRotation",
    "Scene",
    "collides",
    "construct_connectivity_graph",
    "path_validate",
    "query",
    "rotation_at",
]
