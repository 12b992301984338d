"""Ray shooting against polygon boundaries through a uniform edge raster.

Every cast walks raster cells outward from the origin and resolves hits
with exact rational arithmetic.  Ray parameters are expressed in units of
the direction vector as given (not reduced), so a shot aimed at a point
puts that point exactly at parameter 1.

A vertex exactly on the ray is passed or blocked by the material wedge
test: the ray stops there only if it continues strictly into solid
material.  Passed vertices are reported in order with a flag saying
whether a shortest path could bend there, which is what turns a plain
raycast into turning point discovery.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    CONVEX,
    cross,
    dot,
    on_segment,
    point_on_ray,
    same_ray,
    segments_intersect,
    strictly_in_wedge,
    sub,
)


class RaycastError(RuntimeError):
    """The walk left the raster without hitting anything, which means the
    boundary data is broken (the enclosure must stop every ray)."""


@dataclass(frozen=True)
class PassedVertex:
    """A vertex the ray crossed without stopping."""

    vertex: tuple  # (polygon id, vertex index)
    t: Fraction
    bendable: bool  # could a taut path pivot here
    side: int  # +1 material left of the ray, -1 right, 0 straight run


@dataclass(frozen=True)
class RayHit:
    origin: tuple
    direction: tuple
    t: Fraction  # parameter of the blocking intersection
    edge: tuple | None  # (pid, edge index) when blocked mid-edge
    vertex: tuple | None  # (pid, vertex index) when blocked at a vertex
    passed: tuple  # PassedVertex records in ray order

    def point(self):
        return point_on_ray(self.origin, self.direction, self.t)

    @property
    def polygon(self):
        return (self.edge or self.vertex)[0]

    def first_bend(self):
        for pv in self.passed:
            if pv.bendable:
                return pv
        return None


class EdgeRaster:
    """Uniform grid of cells mapping to the boundary edges they touch.

    Cells are closed squares, so an edge lying on a grid line registers
    in the cells on both sides and corner contact registers all around;
    the ray walk can then ignore those degeneracies entirely.
    """

    def __init__(self, env, cell=1):
        if cell < 1:
            raise ValueError("cell size must be a positive integer")
        x0, y0, x1, y1 = env.bbox()
        self.cell = cell
        self.minx = x0 - 1
        self.miny = y0 - 1
        self.cols = (x1 + 1 - self.minx + cell - 1) // cell + 1
        self.rows = (y1 + 1 - self.miny + cell - 1) // cell + 1
        self.cells = {}
        for pid in env.polygon_ids():
            self.add_polygon(env, pid)

    def add_polygon(self, env, pid):
        pts = env.boundary(pid)
        n = len(pts)
        for i in range(n):
            self._register(pid, i, pts[i], pts[(i + 1) % n])

    def remove_polygon(self, pid):
        for refs in self.cells.values():
            refs[:] = [r for r in refs if r[0] != pid]

    def _register(self, pid, i, a, b):
        c = self.cell
        cx_lo = (min(a[0], b[0]) - self.minx) // c - 1
        cx_hi = (max(a[0], b[0]) - self.minx) // c + 1
        cy_lo = (min(a[1], b[1]) - self.miny) // c - 1
        cy_hi = (max(a[1], b[1]) - self.miny) // c + 1
        for cx in range(cx_lo, cx_hi + 1):
            x0 = self.minx + cx * c
            for cy in range(cy_lo, cy_hi + 1):
                y0 = self.miny + cy * c
                if _segment_meets_box(a, b, x0, y0, x0 + c, y0 + c):
                    self.cells.setdefault((cx, cy), []).append((pid, i))

    def cell_of(self, p):
        return (p[0] - self.minx) // self.cell, (p[1] - self.miny) // self.cell


def _segment_meets_box(a, b, x0, y0, x1, y1):
    if max(a[0], b[0]) < x0 or min(a[0], b[0]) > x1:
        return False
    if max(a[1], b[1]) < y0 or min(a[1], b[1]) > y1:
        return False
    for p in (a, b):
        if x0 <= p[0] <= x1 and y0 <= p[1] <= y1:
            return True
    corners = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
    return any(
        segments_intersect(a, b, corners[i], corners[(i + 1) % 4]) for i in range(4)
    )


def shoot_ray(env, raster, origin, direction):
    """Cast from an integer point and report the blocking intersection.

    The origin must sit in closed free space.  Shooting from a boundary
    point straight into material blocks immediately at parameter 0.
    """
    d = direction
    if d[0] == 0 and d[1] == 0:
        raise ValueError("zero direction")

    # blocked before leaving the origin?
    for pid, i in env.vertices_at(origin):
        eb, eo = _wedge(env, pid, i)
        if strictly_in_wedge(eb, eo, d):
            return RayHit(origin, d, Fraction(0), None, (pid, i), ())
    for pid, i in _edges_at(env, raster, origin):
        pts = env.boundary(pid)
        e = sub(pts[(i + 1) % len(pts)], pts[i])
        if cross(e, d) > 0:
            return RayHit(origin, d, Fraction(0), (pid, i), None, ())

    best_t = None
    best_edge = None
    best_vertex = None
    passed = []
    seen_edges = set()
    seen_vertices = set()

    for entry_t, refs in _walk_cells(raster, origin, d):
        if best_t is not None and entry_t > best_t:
            break
        for ref in refs:
            if ref in seen_edges:
                continue
            seen_edges.add(ref)
            pid, i = ref
            pts = env.boundary(pid)
            a = pts[i]
            b = pts[(i + 1) % len(pts)]
            ab = sub(b, a)
            ao = sub(a, origin)
            den = cross(d, ab)
            if den == 0:
                if cross(d, ao) != 0:
                    continue
                # sliding along a collinear edge: only its endpoints matter
                n2 = dot(d, d)
                for q, vi in ((a, i), (b, (i + 1) % len(pts))):
                    s = Fraction(dot(sub(q, origin), d), n2)
                    if s > 0:
                        ev = _vertex_event(env, pid, vi, s, d, seen_vertices)
                        if ev == "block" and (best_t is None or s < best_t):
                            best_t, best_vertex, best_edge = s, (pid, vi), None
                        elif isinstance(ev, PassedVertex):
                            passed.append(ev)
                continue
            s = Fraction(cross(ao, ab), den)
            if s <= 0:
                continue
            u = Fraction(cross(ao, d), den)
            if u < 0 or u > 1:
                continue
            if u == 0 or u == 1:
                vi = i if u == 0 else (i + 1) % len(pts)
                ev = _vertex_event(env, pid, vi, s, d, seen_vertices)
                if ev == "block" and (best_t is None or s < best_t):
                    best_t, best_vertex, best_edge = s, (pid, vi), None
                elif isinstance(ev, PassedVertex):
                    passed.append(ev)
            elif cross(ab, d) > 0:  # proper crossing into material
                if best_t is None or s < best_t:
                    best_t, best_edge, best_vertex = s, ref, None
    if best_t is None:
        raise RaycastError("ray from %r along %r left the map" % (origin, d))
    passed = tuple(sorted((pv for pv in passed if pv.t < best_t), key=lambda pv: pv.t))
    return RayHit(origin, d, best_t, best_edge, best_vertex, passed)


def _wedge(env, pid, i):
    pts = env.boundary(pid)
    v = pts[i]
    return sub(pts[i - 1], v), sub(pts[(i + 1) % len(pts)], v)


def _edges_at(env, raster, p):
    """Edges whose interior contains p (p not an endpoint)."""
    out = []
    for ref in raster.cells.get(raster.cell_of(p), ()):
        pid, i = ref
        pts = env.boundary(pid)
        a = pts[i]
        b = pts[(i + 1) % len(pts)]
        if p != a and p != b and on_segment(a, b, p):
            out.append(ref)
    return out


def _vertex_event(env, pid, i, s, d, seen):
    if (pid, i) in seen:
        return None
    seen.add((pid, i))
    eb, eo = _wedge(env, pid, i)
    if strictly_in_wedge(eb, eo, d):
        return "block"
    rec = env.record(pid, i)
    bendable = (
        rec.convexity == CONVEX
        and not same_ray(d, eo)
        and not same_ray(d, eb)
    )
    cb = cross(d, eb)
    co = cross(d, eo)
    side = 0
    if cb > 0 or co > 0:
        side = 1
    if cb < 0 or co < 0:
        side = -1 if side == 0 else 0
    return PassedVertex((pid, i), s, bendable, side)


def _walk_cells(raster, origin, d):
    """Yield (entry parameter, edge refs) per raster cell along the ray.

    A ray running exactly on a grid line visits the cells on both sides,
    and the entry-0 batch covers every closed cell touching the origin.
    Degenerate corner crossings need no special casing because edges that
    merely touch a cell corner were registered in all four cells.
    """
    c = raster.cell
    ox, oy = origin[0] - raster.minx, origin[1] - raster.miny
    dx, dy = d
    cx, cy = ox // c, oy // c

    slide_x = dx == 0 and ox % c == 0  # ray runs along a vertical grid line
    slide_y = dy == 0 and oy % c == 0

    def cells(bx, by):
        cols = (bx - 1, bx) if slide_x else (bx,)
        rows = (by - 1, by) if slide_y else (by,)
        refs = []
        for i in cols:
            for j in rows:
                refs.extend(raster.cells.get((i, j), ()))
        return refs

    start = []
    for i in ((cx - 1, cx) if ox % c == 0 else (cx,)):
        for j in ((cy - 1, cy) if oy % c == 0 else (cy,)):
            start.extend(raster.cells.get((i, j), ()))
    yield Fraction(0), start

    if dx < 0 and ox % c == 0:
        cx -= 1
    if dy < 0 and oy % c == 0:
        cy -= 1
    next_gx = (cx + 1) * c if dx > 0 else cx * c
    next_gy = (cy + 1) * c if dy > 0 else cy * c

    while True:
        tx = Fraction(next_gx - ox, dx) if dx else None
        ty = Fraction(next_gy - oy, dy) if dy else None
        t = tx if ty is None or (tx is not None and tx <= ty) else ty
        if tx == t:
            cx += 1 if dx > 0 else -1
            next_gx += c if dx > 0 else -c
        if ty == t:
            cy += 1 if dy > 0 else -1
            next_gy += c if dy > 0 else -c
        if not (-1 <= cx <= raster.cols and -1 <= cy <= raster.rows):
            return
        yield t, cells(cx, cy)


class RayCache:
    """Vertex pair cache for repeated casts on an unchanged map.

    Keys are directed (from ref, to ref) vertex pairs; any edit to the
    environment invalidates everything at once.
    """

    def __init__(self, max_entries=None):
        self.max_entries = max_entries
        self.store = {}
        self.revision = None
        self.resets = 0

    def sync(self, env):
        if self.revision != env.revision:
            if self.revision is not None:
                self.resets += 1
            self.store.clear()
            self.revision = env.revision

    def invalidate(self, revision):
        """Eager reset on a known mutation, one reset per edit."""
        self.store.clear()
        self.resets += 1
        self.revision = revision

    def get(self, key):
        return self.store.get(key)

    def put(self, key, hit):
        if self.max_entries is not None and len(self.store) >= self.max_entries:
            self.store.clear()
        self.store[key] = hit
