"""Polygon environments: one enclosure plus disjoint inner obstacles.

Storage orientation is canonical.  Inner obstacle boundaries run
counterclockwise and the enclosure boundary runs clockwise, so solid
material lies on the left of every directed edge and a left turn is a
convex material corner for both kinds of polygon.

Two loaders are provided: a small plain-text polygon format (one E line,
any number of O lines) and the common grid benchmark format where blocked
cell regions are traced into rectilinear polygons.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .geometry import (
    CCW,
    COLLINEAR,
    CONCAVE,
    CONVEX,
    STRAIGHT,
    cross,
    dot,
    on_segment,
    orientation,
    segments_intersect,
    sub,
    vertex_convexity,
)

ENCLOSURE_ID = 0


class MapError(ValueError):
    """Malformed map data or an illegal environment edit."""


class DegeneratePolygon(MapError):
    pass


class IntersectsExisting(MapError):
    pass


class OutsideEnclosure(MapError):
    pass


class UnknownId(MapError):
    pass


class CannotRemoveEnclosure(MapError):
    pass


@dataclass(frozen=True)
class VertexRecord:
    point: tuple
    convexity: str
    on_outer_boundary: bool


def shoelace2(pts):
    """Twice the signed area, positive for counterclockwise."""
    total = 0
    for i in range(len(pts)):
        total += cross(pts[i], pts[(i + 1) % len(pts)])
    return total


def convex_hull(points):
    """Strict convex hull (no collinear points) as a set of corners."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return set(pts)

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) != CCW:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return set(lower[:-1] + upper[:-1])


def point_in_polygon(pts, p):
    """'in', 'on' or 'out' for a closed polygon given as a point list.

    Crossing-number with a half-open rule on y, all integer arithmetic,
    so points exactly on edges or vertices are classified 'on' reliably.
    """
    inside = False
    n = len(pts)
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        if on_segment(a, b, p):
            return "on"
        if (a[1] > p[1]) != (b[1] > p[1]):
            # crossing is right of p iff cross(b-a, p-a) and (by-ay) share sign
            num = cross(sub(b, a), sub(p, a))
            if num != 0 and (num > 0) == (b[1] > a[1]):
                inside = not inside
    return "in" if inside else "out"


class Environment:
    """The enclosure (id 0) and inner obstacles, with per-vertex records.

    Mutations bump ``revision`` so downstream caches can notice staleness.
    """

    def __init__(self, enclosure_pts):
        pts = _clean_polygon(enclosure_pts)
        if shoelace2(pts) > 0:
            pts = pts[::-1]
        self._polys = {ENCLOSURE_ID: tuple(pts)}
        self._records = {}
        self._at_point = {}
        self._next_id = 1
        self.revision = 0
        self._hull = convex_hull(pts)
        self._reindex(ENCLOSURE_ID)

    @classmethod
    def from_polygons(cls, enclosure_pts, obstacle_pts_list=()):
        """Build without cross-polygon checks; loaders use this so grid
        obstacles may share corner points."""
        env = cls(enclosure_pts)
        for pts in obstacle_pts_list:
            env._add_obstacle(pts)
        return env

    # -- read access ----------------------------------------------------

    def polygon_ids(self):
        return sorted(self._polys)

    def obstacle_ids(self):
        return [pid for pid in sorted(self._polys) if pid != ENCLOSURE_ID]

    def boundary(self, pid):
        return self._polys[pid]

    def size(self, pid):
        return len(self._polys[pid])

    def vertex(self, pid, i):
        return self._polys[pid][i]

    def next_i(self, pid, i):
        return (i + 1) % len(self._polys[pid])

    def prev_i(self, pid, i):
        return (i - 1) % len(self._polys[pid])

    def record(self, pid, i):
        return self._records[pid][i]

    def vertices_at(self, point):
        """All (pid, index) refs whose vertex sits exactly at point."""
        return self._at_point.get(point, ())

    def edges(self):
        for pid, pts in self._polys.items():
            n = len(pts)
            for i in range(n):
                yield pid, i, pts[i], pts[(i + 1) % n]

    def bbox(self):
        pts = self._polys[ENCLOSURE_ID]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return min(xs), min(ys), max(xs), max(ys)

    def classify_point(self, p):
        """'free', 'boundary', 'obstacle' or 'outside' (closed free space:
        boundaries are legal positions)."""
        w = point_in_polygon(self._polys[ENCLOSURE_ID], p)
        if w == "on":
            return "boundary"
        if w == "out":
            return "outside"
        for pid, pts in self._polys.items():
            if pid == ENCLOSURE_ID:
                continue
            w = point_in_polygon(pts, p)
            if w == "on":
                return "boundary"
            if w == "in":
                return "obstacle"
        return "free"

    # -- mutation --------------------------------------------------------

    def insert_obstacle(self, points):
        """Validate and add an inner obstacle, returning its new id.

        The polygon must be simple, strictly inside the enclosure and
        fully disjoint from every existing obstacle (point contact
        counts as intersection here, unlike grid-loaded maps).
        """
        pts = _clean_polygon(points)
        n = len(pts)
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            for ep in _edge_list(self._polys[ENCLOSURE_ID]):
                if segments_intersect(a, b, ep[0], ep[1]):
                    raise OutsideEnclosure("edge touches the enclosure boundary")
        if point_in_polygon(self._polys[ENCLOSURE_ID], pts[0]) != "in":
            raise OutsideEnclosure("polygon lies outside the enclosure")
        for pid, other in self._polys.items():
            if pid == ENCLOSURE_ID:
                continue
            for i in range(n):
                a, b = pts[i], pts[(i + 1) % n]
                for ep in _edge_list(other):
                    if segments_intersect(a, b, ep[0], ep[1]):
                        raise IntersectsExisting("touches obstacle %d" % pid)
            if point_in_polygon(other, pts[0]) == "in":
                raise IntersectsExisting("inside obstacle %d" % pid)
            if point_in_polygon(pts, other[0]) == "in":
                raise IntersectsExisting("contains obstacle %d" % pid)
        return self._add_obstacle(pts)

    def remove_obstacle(self, pid):
        if pid == ENCLOSURE_ID:
            raise CannotRemoveEnclosure("the enclosure cannot be removed")
        if pid not in self._polys:
            raise UnknownId("no obstacle with id %d" % pid)
        pts = self._polys.pop(pid)
        del self._records[pid]
        for i, p in enumerate(pts):
            refs = self._at_point[p]
            refs.remove((pid, i))
            if not refs:
                del self._at_point[p]
        self.revision += 1

    def _add_obstacle(self, points):
        pts = _clean_polygon(points)
        if shoelace2(pts) < 0:
            pts = pts[::-1]
        pid = self._next_id
        self._next_id += 1
        self._polys[pid] = tuple(pts)
        self._reindex(pid)
        self.revision += 1
        return pid

    def _reindex(self, pid):
        pts = self._polys[pid]
        n = len(pts)
        outer = self._hull if pid == ENCLOSURE_ID else ()
        recs = []
        for i in range(n):
            conv = vertex_convexity(pts[i - 1], pts[i], pts[(i + 1) % n])
            recs.append(VertexRecord(pts[i], conv, pts[i] in outer))
            self._at_point.setdefault(pts[i], []).append((pid, i))
        self._records[pid] = tuple(recs)


def _clean_polygon(points):
    pts = [tuple(p) for p in points]
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 3:
        raise DegeneratePolygon("need at least three vertices")
    if len(set(pts)) != len(pts):
        raise DegeneratePolygon("repeated vertex")
    if shoelace2(pts) == 0:
        raise DegeneratePolygon("zero area")
    n = len(pts)
    for i in range(n):
        e1 = sub(pts[(i + 1) % n], pts[i])
        e2 = sub(pts[(i + 2) % n], pts[(i + 1) % n])
        if cross(e1, e2) == 0 and dot(e1, e2) < 0:
            raise DegeneratePolygon("boundary doubles back at %r" % (pts[(i + 1) % n],))
    for i in range(n):
        a1, b1 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            a2, b2 = pts[j], pts[(j + 1) % n]
            if segments_intersect(a1, b1, a2, b2):
                raise DegeneratePolygon("self intersection near %r" % (a1,))
    return pts


def _edge_list(pts):
    return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


# -- plain text polygon maps ---------------------------------------------


def load_polygon_map(text):
    """Parse the small native format: one ``E x y x y ...`` enclosure line
    and any number of ``O x y x y ...`` obstacle lines, ``#`` comments."""
    enclosure = None
    obstacles = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind not in ("E", "O"):
            raise MapError("line %d: expected E or O, got %r" % (lineno, kind))
        try:
            nums = [int(f) for f in fields[1:]]
        except ValueError:
            raise MapError("line %d: coordinates must be integers" % lineno)
        if len(nums) < 6 or len(nums) % 2 != 0:
            raise MapError("line %d: need an even number of coordinates, at least 6" % lineno)
        pts = list(zip(nums[0::2], nums[1::2]))
        if kind == "E":
            if enclosure is not None:
                raise MapError("line %d: duplicate enclosure" % lineno)
            enclosure = pts
        else:
            obstacles.append(pts)
    if enclosure is None:
        raise MapError("no enclosure (E) line")
    return Environment.from_polygons(enclosure, obstacles)


def dump_polygon_map(env):
    lines = []
    for pid in env.polygon_ids():
        kind = "E" if pid == ENCLOSURE_ID else "O"
        coords = " ".join("%d %d" % p for p in env.boundary(pid))
        lines.append("%s %s" % (kind, coords))
    return "\n".join(lines) + "\n"


# -- grid benchmark maps ---------------------------------------------------

BLOCKED_CHARS = frozenset("@OTW")
PASSABLE_CHARS = frozenset(".GS")


def load_grid_map(text):
    """Convert a grid benchmark map into a polygon environment.

    Cell (row, col) of an H-row map becomes the unit square
    [col, col+1] x [H-1-row, H-row], so y grows upward.  Only the largest
    4-connected passable component is kept; the rest is filled in.  Every
    blocked region becomes an obstacle polygon (regions touching the map
    border merge into the enclosure boundary), with all grid corners kept
    as vertices and corner-pinched regions split into simple loops that
    share the pinch point.
    """
    grid, H, W = _parse_grid(text)
    _keep_largest_component(grid, H, W)

    # label material: None for passable, 'O' for border-connected blocked,
    # integers for inner blocked components.  The virtual pad ring around
    # the map seeds 'O'.
    label = [[None] * W for _ in range(H)]
    seeds = deque()
    for r in range(H):
        for c in range(W):
            if grid[r][c] and (r in (0, H - 1) or c in (0, W - 1)):
                seeds.append((r, c))
                label[r][c] = "O"
    _flood(grid, label, seeds, "O", H, W)
    next_label = 1
    for r in range(H):
        for c in range(W):
            if grid[r][c] and label[r][c] is None:
                label[r][c] = next_label
                _flood(grid, label, deque([(r, c)]), next_label, H, W)
                next_label += 1

    edges = _boundary_edges(grid, label, H, W)
    loops_by_region = _trace_loops(edges)

    outer_loops = loops_by_region.pop("O", [])
    if len(outer_loops) != 1:
        raise MapError("expected one outer boundary, found %d" % len(outer_loops))
    obstacles = [loop for loops in loops_by_region.values() for loop in loops]

    enclosure = outer_loops[0]
    if shoelace2(enclosure) > 0:
        raise MapError("outer boundary traced with the wrong orientation")
    for loop in obstacles:
        if shoelace2(loop) < 0:
            raise MapError("obstacle boundary traced with the wrong orientation")
    return Environment.from_polygons(enclosure, obstacles)


def _parse_grid(text):
    lines = text.splitlines()
    pos = 0
    header = {}
    while pos < len(lines):
        line = lines[pos].strip()
        pos += 1
        if not line:
            continue
        if line == "map":
            break
        fields = line.split()
        if len(fields) == 2:
            header[fields[0]] = fields[1]
        elif fields[0] != "type":
            raise MapError("bad header line %r" % line)
    else:
        raise MapError("no map section")
    try:
        H = int(header["height"])
        W = int(header["width"])
    except (KeyError, ValueError):
        raise MapError("missing or bad height/width header")
    rows = [ln for ln in lines[pos:] if ln.strip()]
    if len(rows) != H:
        raise MapError("expected %d rows, got %d" % (H, len(rows)))
    grid = []
    for r, row in enumerate(rows):
        row = row.rstrip()
        if len(row) != W:
            raise MapError("row %d has %d cells, expected %d" % (r, len(row), W))
        cells = []
        for ch in row:
            if ch in BLOCKED_CHARS:
                cells.append(True)
            elif ch in PASSABLE_CHARS:
                cells.append(False)
            else:
                raise MapError("unknown cell %r in row %d" % (ch, r))
        grid.append(cells)
    return grid, H, W


def _keep_largest_component(grid, H, W):
    seen = [[False] * W for _ in range(H)]
    best = None
    for r in range(H):
        for c in range(W):
            if grid[r][c] or seen[r][c]:
                continue
            comp = []
            queue = deque([(r, c)])
            seen[r][c] = True
            while queue:
                cr, cc = queue.popleft()
                comp.append((cr, cc))
                for nr, nc in ((cr - 1, cc), (cr + 1, cc), (cr, cc - 1), (cr, cc + 1)):
                    if 0 <= nr < H and 0 <= nc < W and not grid[nr][nc] and not seen[nr][nc]:
                        seen[nr][nc] = True
                        queue.append((nr, nc))
            if best is None or len(comp) > len(best):
                best = comp
    if best is None:
        raise MapError("map has no passable cells")
    keep = set(best)
    for r in range(H):
        for c in range(W):
            if not grid[r][c] and (r, c) not in keep:
                grid[r][c] = True


def _flood(grid, label, queue, value, H, W):
    while queue:
        r, c = queue.popleft()
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < H and 0 <= nc < W and grid[nr][nc] and label[nr][nc] is None:
                label[nr][nc] = value
                queue.append((nr, nc))


def _boundary_edges(grid, label, H, W):
    """Directed unit edges between passable and blocked cells, keyed by the
    material region label, oriented with material on the left."""
    edges = {}

    def blocked_at(r, c):
        if 0 <= r < H and 0 <= c < W:
            return label[r][c] if grid[r][c] else None
        return "O"

    for r in range(H):
        for c in range(W):
            if grid[r][c]:
                continue
            x0, x1 = c, c + 1
            y0, y1 = H - 1 - r, H - r
            up = blocked_at(r - 1, c)
            if up is not None:
                edges.setdefault(up, {}).setdefault((x0, y1), []).append((x1, y1))
            down = blocked_at(r + 1, c)
            if down is not None:
                edges.setdefault(down, {}).setdefault((x1, y0), []).append((x0, y0))
            left = blocked_at(r, c - 1)
            if left is not None:
                edges.setdefault(left, {}).setdefault((x0, y0), []).append((x0, y1))
            right = blocked_at(r, c + 1)
            if right is not None:
                edges.setdefault(right, {}).setdefault((x1, y1), []).append((x1, y0))
    return edges


def _trace_loops(edges):
    """Link directed unit edges into closed loops, one region at a time.

    At a pinch corner (two blocked squares of one region meeting
    diagonally) the incoming edge pairs with the left-turn continuation,
    which hugs the square just walked and splits the region into simple
    loops that share the corner.
    """
    loops_by_region = {}
    for region, out in edges.items():
        loops = []
        pending = {start: sorted(ends) for start, ends in out.items()}
        while pending:
            start = min(pending)
            loop = [start]
            cur = pending[start].pop(0)
            if not pending[start]:
                del pending[start]
            din = sub(cur, start)
            while cur != start:
                loop.append(cur)
                ends = pending[cur]
                if len(ends) == 1:
                    nxt = ends[0]
                else:
                    nxt = max(ends, key=lambda e: _turn_rank(din, sub(e, cur)))
                ends.remove(nxt)
                if not ends:
                    del pending[cur]
                din = sub(nxt, cur)
                cur = nxt
            loops.append(loop)
        loops_by_region[region] = loops
    return loops_by_region


def _turn_rank(din, dout):
    """Left turn beats straight beats right turn; reversal last."""
    c = cross(din, dout)
    if c > 0:
        return 3
    if c == 0:
        return 2 if dot(din, dout) > 0 else 0
    return 1
