"""Exact Euclidean shortest paths among polygonal obstacles.

Paths are found by an A* search whose successors are discovered online:
each expanded corner shoots rays bounding its taut projection field and
scans the obstacle boundaries those rays hit.  See `SearchEngine` for
queries, `Environment` for maps, and `VisibilityOracle` for the
brute-force reference used in tests and benchmarks.
"""
from .environment import (
    ENCLOSURE_ID,
    DegeneratePolygon,
    Environment,
    IntersectsExisting,
    MapError,
    OutsideEnclosure,
    UnknownId,
    dump_polygon_map,
    load_grid_map,
    load_polygon_map,
)
from .oracle import VisibilityOracle, segment_visible
from .raycaster import EdgeRaster, RayCache, RayHit, shoot_ray
from .scanner import MalformedBoundary, ScanDepthExceeded
from .search import (
    NAMED_CONFIGS,
    EngineConfig,
    InvalidStart,
    InvalidTarget,
    PathResult,
    SearchEngine,
    Stats,
)
from .svg import render_svg, write_svg

__version__ = "0.1.0"

__all__ = [
    "ENCLOSURE_ID",
    "DegeneratePolygon",
    "EdgeRaster",
    "EngineConfig",
    "Environment",
    "IntersectsExisting",
    "InvalidStart",
    "InvalidTarget",
    "MalformedBoundary",
    "MapError",
    "NAMED_CONFIGS",
    "OutsideEnclosure",
    "PathResult",
    "RayCache",
    "RayHit",
    "ScanDepthExceeded",
    "SearchEngine",
    "Stats",
    "UnknownId",
    "VisibilityOracle",
    "dump_polygon_map",
    "load_grid_map",
    "load_polygon_map",
    "render_svg",
    "segment_visible",
    "shoot_ray",
    "write_svg",
]
