"""A* over convex corners with visibility discovered by ray shooting.

Instead of precomputing a visibility graph, each expansion shoots the two
extreme rays of the node's projection field, scans the boundaries those
rays hit, and shoots at any surviving targets.  Optional refinements
narrow or abandon scans: blocking removes targets hidden behind walked
boundary, skip and bypass walk past turning points whose rays cannot
improve the search, and a cache keeps ray results between queries.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field, replace

from .environment import ENCLOSURE_ID
from .geometry import (
    CONCAVE,
    AngledSector,
    cw_angle_key,
    dist,
    full_sector,
    norm2,
    reduce_direction,
    same_ray,
    split_ccw,
    split_cw,
    sub,
)
from .raycaster import EdgeRaster, RayCache, shoot_ray
from .scanner import CCW, CW, hit_position, run_scan

INF = float("inf")


class SearchError(ValueError):
    pass


class InvalidStart(SearchError):
    pass


class InvalidTarget(SearchError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    scan_mode: str = "convex"  # convex | forward
    refine: str = "ray"  # ray | sector
    blocking: bool = True
    skip: bool = True
    bypass: bool = True
    cache: bool = False
    skip_budget: int = 16
    heuristic: str = "nearest"  # nearest | zero


_BASE = EngineConfig(blocking=False, skip=False, bypass=False, cache=False)

NAMED_CONFIGS = {
    "R": replace(_BASE, scan_mode="forward", refine="sector"),
    "N": _BASE,
    "NB": replace(_BASE, blocking=True),
    "NS": replace(_BASE, skip=True),
    "NP": replace(_BASE, bypass=True),
    "NC": replace(_BASE, cache=True),
    "NBSP": replace(_BASE, blocking=True, skip=True, bypass=True),
    "NBSPC": replace(_BASE, blocking=True, skip=True, bypass=True, cache=True),
}


@dataclass
class Stats:
    rays: int = 0
    cache_hits: int = 0
    vertex_pair_walks: int = 0
    expansions: int = 0
    swept: int = 0
    skips: int = 0
    bypasses: int = 0
    blocked: int = 0
    concave_shots: int = 0
    duplicate_casts: int = 0
    expansion_order: list = field(default_factory=list)
    trace: list | None = None


@dataclass
class PathResult:
    length: float | None
    waypoints: list
    stats: Stats


class _Node:
    __slots__ = ("g", "parent", "wrap", "point")

    def __init__(self, point):
        self.g = INF
        self.parent = None
        self.wrap = None
        self.point = point


class _TargetView:
    __slots__ = ("tid", "point")

    def __init__(self, tid, point):
        self.tid = tid
        self.point = point


class _Expansion:
    """Per-node scratch state shared between the engine and the scanner."""

    def __init__(self, engine, search, key, point, g, sector):
        self.engine = engine
        self.env = engine.env
        self.cfg = engine.cfg
        self.search = search
        self.stats = search.stats
        self.u_key = key
        self.u_point = point
        self.g_u = g
        self.field = sector
        self.targets = []
        # Targets that can no longer be shot directly (occluded or already
        # resolved as blocked) still anchor routes through turning points,
        # so bypass decisions keep honouring them.
        self.guarded = []
        self.dirs = {}  # reduced direction -> RayHit, one entry per cast line

    def already_shot(self, d):
        return reduce_direction(d) in self.dirs

    def shoot(self, d, to_ref=None, tp=False):
        """Cast from the expanding point along d; returns (hit, scale,
        repeated) where scale puts the aimed point at parameter scale."""
        dr = reduce_direction(d)
        k = abs(d[0] // dr[0]) if dr[0] else abs(d[1] // dr[1])
        if dr in self.dirs:
            if self.cfg.refine == "ray":
                return self.dirs[dr], k, True
            self.stats.duplicate_casts += 1
        hit = self.engine._cast(self, dr, to_ref, tp)
        self.dirs[dr] = hit
        bend = hit.first_bend()
        if bend is not None:
            vp = self.env.vertex(*bend.vertex)
            self.push_vertex(bend.vertex, vp, CCW if bend.side > 0 else CW)
        return hit, k, False

    def push_vertex(self, ref, point, wrap):
        self.search.push(
            ("v",) + ref, point, self.g_u + dist(self.u_point, point), self.u_key, wrap
        )

    def recorded_g(self, ref):
        node = self.search.nodes.get(("v",) + ref)
        if node is not None and node.g < INF:
            return node.g
        return None

    def remove_target(self, tv):
        self.targets.remove(tv)
        self.guarded.append(tv)
        self.stats.blocked += 1

    def trace(self, kind, point):
        if self.stats.trace is not None:
            self.stats.trace.append(
                (kind, _f(self.u_point), (float(point[0]), float(point[1])))
            )


def _f(p):
    return (float(p[0]), float(p[1]))


class _Search:
    """One multi-target query: queue, node table and target bookkeeping."""

    def __init__(self, engine, start, points, trace):
        self.engine = engine
        self.stats = Stats(trace=[] if trace else None)
        self.start = start
        self.points = points  # unique target points
        self.nodes = {("s",): _Node(start)}
        self.nodes[("s",)].g = 0.0
        self.finalized = {}
        self.closed = set()
        self.heap = []
        self.seq = itertools.count()

    def open_targets(self):
        return [t for t in range(len(self.points)) if t not in self.finalized]

    def h(self, point):
        # Nearest distance over the full target set.  Restricting this to
        # still-open targets would raise h mid-run once a target resolves,
        # and stale queue entries would then close nodes with non-final g.
        if self.engine.cfg.heuristic == "zero":
            return 0.0
        best = None
        for p in self.points:
            d = dist(point, p)
            if best is None or d < best:
                best = d
        return best or 0.0

    def push(self, key, point, g, parent, wrap):
        if key in self.closed:
            return
        node = self.nodes.get(key)
        if node is None:
            node = self.nodes[key] = _Node(point)
        if g < node.g:
            node.g = g
            node.parent = parent
            node.wrap = wrap
            heapq.heappush(
                self.heap, (g + self.h(point), -g, next(self.seq), key, g)
            )

    def finalize(self, tid, g, parent):
        key = ("t", tid)
        node = self.nodes.get(key)
        if node is None:
            node = self.nodes[key] = _Node(self.points[tid])
        if g < node.g:
            node.g = g
            node.parent = parent
        self.finalized[tid] = node.g
        self.closed.add(key)

    def waypoints(self, tid):
        key = ("t", tid)
        if self.nodes.get(key) is None:
            return None
        out = []
        while key is not None:
            node = self.nodes[key]
            out.append(node.point)
            key = node.parent
        out.reverse()
        return out


class SearchEngine:
    def __init__(self, env, config=None):
        self.env = env
        self.cfg = config if config is not None else EngineConfig()
        self.raster = EdgeRaster(env)
        self.cache = RayCache() if self.cfg.cache else None

    # -- map mutation ---------------------------------------------------

    def insert_obstacle(self, points):
        pid = self.env.insert_obstacle(points)
        self.raster.add_polygon(self.env, pid)
        if self.cache is not None:
            self.cache.invalidate(self.env.revision)
        return pid

    def remove_obstacle(self, pid):
        self.raster.remove_polygon(pid)
        self.env.remove_obstacle(pid)
        if self.cache is not None:
            self.cache.invalidate(self.env.revision)

    @property
    def cache_resets(self):
        return self.cache.resets if self.cache is not None else 0

    # -- queries ----------------------------------------------------------

    def find_path(self, start, target, trace=False):
        return self.find_paths_multi(start, [target], trace=trace)[0]

    def find_paths_multi(self, start, targets, trace=False):
        start = (int(start[0]), int(start[1]))
        if self.env.classify_point(start) in ("obstacle", "outside"):
            raise InvalidStart("start %r is not traversable" % (start,))
        pts = []
        for t in targets:
            t = (int(t[0]), int(t[1]))
            if self.env.classify_point(t) in ("obstacle", "outside"):
                raise InvalidTarget("target %r is not traversable" % (t,))
            pts.append(t)
        if self.cache is not None:
            self.cache.sync(self.env)

        unique = {}
        tids = []
        for p in pts:
            if p not in unique:
                unique[p] = len(unique)
            tids.append(unique[p])
        points = list(unique)

        search = _Search(self, start, points, trace)
        for tid, p in enumerate(points):
            if p == start:
                search.finalize(tid, 0.0, None)
        if len(search.finalized) < len(points):
            self._expand(search, ("s",), start, 0.0)
        while search.heap and len(search.finalized) < len(points):
            f, ng, _, key, g_at = heapq.heappop(search.heap)
            node = search.nodes[key]
            if g_at != node.g or key in search.closed:
                continue
            if key[0] == "t":
                search.finalize(key[1], node.g, node.parent)
                continue
            search.closed.add(key)
            search.stats.expansion_order.append(node.point)
            self._expand(search, key, node.point, node.g)

        out = []
        for tid in tids:
            g = search.finalized.get(tid)
            wp = search.waypoints(tid) if g is not None else None
            out.append(PathResult(g, wp, search.stats))
        return out

    # -- expansion ----------------------------------------------------------

    def _cast(self, exp, direction, to_ref, tp=False):
        stats = exp.stats
        stats.rays += 1
        if tp and self.env.record(*to_ref).convexity == CONCAVE:
            stats.concave_shots += 1
        cacheable = (
            self.cache is not None
            and exp.u_key[0] == "v"
            and to_ref is not None
        )
        hit = None
        if cacheable:
            ckey = (exp.u_key[1:], to_ref)
            hit = self.cache.get(ckey)
            if hit is not None:
                stats.cache_hits += 1
        if hit is None:
            hit = shoot_ray(self.env, self.raster, exp.u_point, direction)
            if cacheable:
                stats.vertex_pair_walks += 1
                self.cache.put(ckey, hit)
        if stats.trace is not None:
            stats.trace.append(("ray", _f(exp.u_point), _f(hit.point())))
        return hit

    def _field(self, search, key, node):
        v = node.point
        pid, i = key[1], key[2]
        parent = search.nodes[node.parent]
        din = reduce_direction(sub(v, parent.point))
        if node.wrap == CCW:
            out = reduce_direction(sub(self.env.vertex(pid, self.env.next_i(pid, i)), v))
            return AngledSector(out, din), (pid, self.env.next_i(pid, i)), None
        back = reduce_direction(sub(self.env.vertex(pid, self.env.prev_i(pid, i)), v))
        return AngledSector(din, back), None, (pid, self.env.prev_i(pid, i))

    def _expand(self, search, key, point, g):
        search.stats.expansions += 1
        if key == ("s",):
            anchor = None
            for tid in search.open_targets():
                if search.points[tid] != point:
                    anchor = reduce_direction(sub(search.points[tid], point))
                    break
            if anchor is None:
                return
            exp = _Expansion(self, search, key, point, g, full_sector(anchor))
            self._populate(search, exp)
            self._target_successors(search, exp)
            return

        node = search.nodes[key]
        sector, ccw_ref, cw_ref = self._field(search, key, node)
        exp = _Expansion(self, search, key, point, g, sector)
        self._populate(search, exp)

        hit, _, _ = exp.shoot(sector.ccw_pivot, to_ref=ccw_ref)
        he, hp = hit_position(exp, hit)
        run_scan(exp, hit.polygon, he, hp, self._clamp(exp, sector, CW), CW)

        d2 = sector.cw_pivot
        if not (self.cfg.refine == "ray" and exp.already_shot(d2)):
            hit, _, _ = exp.shoot(d2, to_ref=cw_ref)
            he, hp = hit_position(exp, hit)
            run_scan(exp, hit.polygon, he, hp, self._clamp(exp, sector, CCW), CCW)

        self._target_successors(search, exp)

    def _populate(self, search, exp):
        live = []
        for tid in search.open_targets():
            p = search.points[tid]
            if p == exp.u_point:
                search.finalize(tid, exp.g_u, exp.u_key)
                continue
            d = sub(p, exp.u_point)
            if exp.field.contains(d):
                live.append((tid, p, d))
        keyf = cw_angle_key(exp.field.ccw_pivot)
        live.sort(key=lambda e: (keyf(e[2]), norm2(e[2]), e[0]))
        exp.targets = [_TargetView(tid, p) for tid, p, _ in live]

    def _target_successors(self, search, exp):
        while exp.targets:
            tv = exp.targets.pop(0)
            d = sub(tv.point, exp.u_point)
            hit, scale, _ = exp.shoot(d)
            if hit.t >= scale:
                search.push(
                    ("t", tv.tid),
                    tv.point,
                    exp.g_u + dist(exp.u_point, tv.point),
                    exp.u_key,
                    None,
                )
                continue
            he, hp = hit_position(exp, hit)
            if exp.field.full:
                # Re-anchor the full field at the blocked ray: the two
                # scans cover each other's far side, while the field's
                # own anchor is an arbitrary direction with no coverage.
                s_cw = s_ccw = full_sector(d)
            else:
                s_cw = self._clamp(exp, split_cw(exp.field, d), CW)
                s_ccw = self._clamp(exp, split_ccw(exp.field, d), CCW)
            exp.guarded.append(tv)
            run_scan(exp, hit.polygon, he, hp, s_cw, CW)
            run_scan(exp, hit.polygon, he, hp, s_ccw, CCW)

    def _clamp(self, exp, sector, sweep):
        """Sector refinement: stop a planned scan at the nearest ray that
        was already shot this expansion, instead of the sector's far end."""
        if self.cfg.refine != "sector" or sector.full:
            return sector
        start = sector.ccw_pivot if sweep == CW else sector.cw_pivot
        keyf = cw_angle_key(start)
        best = None
        for dr in exp.dirs:
            if same_ray(dr, start) or not sector.contains(dr):
                continue
            k = keyf(dr)
            if best is None or (k < best[0] if sweep == CW else k > best[0]):
                best = (k, dr)
        if best is None:
            return sector
        if sweep == CW:
            return AngledSector(start, best[1])
        return AngledSector(best[1], start)
