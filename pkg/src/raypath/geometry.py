"""Exact planar primitives: integer points, directions, angled sectors.

All map coordinates are integers (y grows upward) and every predicate is
decided by the sign of an integer cross product, so nothing in here needs
an epsilon.  Floating point only appears downstream, in path lengths and
search priorities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Point = tuple  # (x, y), ints for map data, Fractions for intersections
Direction = tuple  # (dx, dy), never (0, 0)

CCW = 1
COLLINEAR = 0
CW = -1

CONVEX = "convex"
CONCAVE = "concave"
STRAIGHT = "straight"


def sub(a, b):
    """a - b, componentwise."""
    return (a[0] - b[0], a[1] - b[1])


def cross(a, b):
    """z component of a x b."""
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def orientation(a, b, c):
    """CCW / COLLINEAR / CW sign of the turn a -> b -> c."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if v > 0:
        return CCW
    if v < 0:
        return CW
    return COLLINEAR


def norm2(d):
    return d[0] * d[0] + d[1] * d[1]


def dist(a, b) -> float:
    return math.hypot(float(b[0] - a[0]), float(b[1] - a[1]))


def reduce_direction(d) -> Direction:
    """Canonical primitive integer vector pointing the same way."""
    g = math.gcd(abs(d[0]), abs(d[1]))
    if g == 0:
        raise ValueError("zero direction")
    return (d[0] // g, d[1] // g)


def same_ray(a, b) -> bool:
    """True iff a and b point the same way (parallel and same sign)."""
    return cross(a, b) == 0 and dot(a, b) > 0


def vertex_convexity(prev_pt, pt, next_pt) -> str:
    """Corner class under the canonical storage orientations.

    Inner obstacles are stored counterclockwise and the enclosure
    clockwise, which puts solid material on the left of every directed
    boundary edge.  A left turn is then a convex material corner for
    both kinds of polygon.
    """
    o = orientation(prev_pt, pt, next_pt)
    if o == CCW:
        return CONVEX
    if o == CW:
        return CONCAVE
    return STRAIGHT


@dataclass(frozen=True)
class AngledSector:
    """Angular region swept clockwise from ccw_pivot around to cw_pivot.

    Pivot rays are part of the sector.  ``full`` marks the 360 degree
    sector whose two boundaries coincide at an anchor direction; equal
    pivots without ``full`` denote the zero width sector holding just
    that one direction.  Both degenerate forms occur naturally: a start
    node sees the whole plane, and a projection field collapses to a
    single ray when the arrival direction grazes a boundary edge.
    """

    ccw_pivot: Direction
    cw_pivot: Direction
    full: bool = False

    def contains(self, d) -> bool:
        if self.full:
            return True
        a, b = self.ccw_pivot, self.cw_pivot
        s = cross(a, b)
        if s == 0:
            if dot(a, b) > 0:
                return same_ray(a, d)
            return cross(a, d) <= 0  # exactly a half plane
        if s < 0:
            # span under 180 degrees: cw of a and ccw of b
            return cross(a, d) <= 0 and cross(d, b) <= 0
        # reflex: everything except the open slice ccw of a and cw of b
        return cross(a, d) <= 0 or cross(d, b) <= 0


def full_sector(anchor) -> AngledSector:
    d = reduce_direction(anchor)
    return AngledSector(d, d, full=True)


def split_cw(sector: AngledSector, d) -> AngledSector:
    """Part of ``sector`` swept clockwise from d to the cw pivot.

    A full sector narrows to the arc from d around to its anchor, so
    the anchor must be a direction whose far side has scan coverage of
    its own; splitting along the anchor itself keeps the full sweep.
    """
    d = reduce_direction(d)
    if sector.full and same_ray(d, sector.cw_pivot):
        return AngledSector(d, d, full=True)
    return AngledSector(d, sector.cw_pivot)


def split_ccw(sector: AngledSector, d) -> AngledSector:
    """Part of ``sector`` swept clockwise from the ccw pivot to d."""
    d = reduce_direction(d)
    if sector.full and same_ray(d, sector.ccw_pivot):
        return AngledSector(d, d, full=True)
    return AngledSector(sector.ccw_pivot, d)


def arc_contains_strict(da, db, d) -> bool:
    """Is d strictly inside the minor arc from da to db?

    A straight boundary edge watched from a point off its line always
    subtends less than half a turn, so the minor arc is the swept arc.
    Radial steps (cross(da, db) == 0) sweep nothing.
    """
    s = cross(da, db)
    if s == 0:
        return False
    if s > 0:
        return cross(da, d) > 0 and cross(d, db) > 0
    return cross(da, d) < 0 and cross(d, db) < 0


def arc_contains_inclusive(da, db, d) -> bool:
    """Like arc_contains_strict but counting the arc end rays."""
    s = cross(da, db)
    if s == 0:
        return cross(da, d) == 0 and (dot(da, d) > 0 or dot(db, d) > 0)
    if s > 0:
        return cross(da, d) >= 0 and cross(d, db) >= 0
    return cross(da, d) <= 0 and cross(d, db) <= 0


class _HalfPlaneRank:
    """Orders directions that lie strictly inside one open half plane.

    Inside such a half plane "d1 is clockwise-earlier than d2" is exactly
    cross(d1, d2) < 0, with no wraparound to worry about.
    """

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = d

    def __lt__(self, other):
        return cross(self.d, other.d) < 0

    def __eq__(self, other):
        return cross(self.d, other.d) == 0


def cw_angle_key(reference):
    """sorted() key ordering directions by clockwise angle from reference.

    Exact: buckets directions into {on reference ray, first clockwise
    half turn, opposite ray, second half turn} and ranks within a bucket
    by a single cross sign.
    """
    ref = reduce_direction(reference)

    def key(d):
        c = cross(ref, d)
        if c == 0:
            return (0 if dot(ref, d) > 0 else 2, 0)
        if c < 0:
            return (1, _HalfPlaneRank(d))
        return (3, _HalfPlaneRank(d))

    return key


def strictly_in_wedge(e_back, e_out, d):
    """Is d strictly inside the material wedge at a boundary vertex?

    e_back and e_out point from the vertex toward its stored predecessor
    and successor.  Under the canonical orientations material fills the
    sweep clockwise from e_back around to e_out, so a ray continuing
    strictly inside that sweep dives into solid; along either boundary
    edge it merely grazes.
    """
    s = cross(e_back, e_out)
    if s < 0:  # convex corner, under half a turn of material
        return cross(e_back, d) < 0 and cross(d, e_out) < 0
    if s > 0:  # reflex corner: complement of the open free wedge
        return not (cross(e_out, d) <= 0 and cross(d, e_back) <= 0)
    if dot(e_back, e_out) < 0:  # straight run: material strictly left
        return cross(e_out, d) > 0
    return False  # degenerate spike has no interior


def on_segment(a, b, p):
    """Is p on the closed segment from a to b?"""
    if orientation(a, b, p) != COLLINEAR:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(a, b, c, d):
    """Closed segment intersection test: endpoint contact counts."""
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == COLLINEAR and on_segment(a, b, c):
        return True
    if o2 == COLLINEAR and on_segment(a, b, d):
        return True
    if o3 == COLLINEAR and on_segment(c, d, a):
        return True
    if o4 == COLLINEAR and on_segment(c, d, b):
        return True
    return False


def ray_segment_param(origin, d, a, b):
    """Smallest s >= 0 with origin + s*d on segment [a, b], else None.

    Handles collinear overlap by projecting the endpoints onto the ray.
    Exact (Fraction) throughout; used by tests and the reference solver,
    the engine's raycaster has its own incremental version.
    """
    ab = sub(b, a)
    ao = sub(a, origin)
    den = cross(d, ab)
    if den == 0:
        if cross(d, ao) != 0:
            return None
        n2 = norm2(d)
        sa = Fraction(dot(sub(a, origin), d), n2)
        sb = Fraction(dot(sub(b, origin), d), n2)
        lo, hi = min(sa, sb), max(sa, sb)
        if hi < 0:
            return None
        return max(lo, Fraction(0))
    s = Fraction(cross(ao, ab), den)
    u = Fraction(cross(ao, d), den)
    if s < 0 or u < 0 or u > 1:
        return None
    return s


def point_on_ray(origin, d, s):
    """origin + s*d with exact arithmetic."""
    return (origin[0] + s * d[0], origin[1] + s * d[1])
