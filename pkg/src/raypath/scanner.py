"""Boundary scanning: sweep a polygon outline inside an angled sector.

A scan walks edge by edge away from a blocking intersection, watching the
swept angle from the expanding point.  It stops when the sweep leaves its
sector, touches the outer boundary, or returns to the expanding point,
and pauses at turning points, where the expansion decides whether to
shoot, skip past, or bypass.  Everything here works on exact integers and
fractions; the expansion object owns floats, rays and the search queue.

The expansion object must provide: env, cfg, stats, u_point, g_u,
targets and guarded (TargetView lists), shoot()/already_shot(),
push_vertex(), recorded_g(), remove_target(), and trace().
"""
from __future__ import annotations

from fractions import Fraction

from .geometry import (
    CONVEX,
    arc_contains_inclusive,
    arc_contains_strict,
    cross,
    dist,
    dot,
    norm2,
    on_segment,
    same_ray,
    split_ccw,
    split_cw,
    sub,
)

CW = "cw"
CCW = "ccw"

MAX_PENDING_SCANS = 10_000


class ScanDepthExceeded(RuntimeError):
    pass


class MalformedBoundary(RuntimeError):
    pass


def opposite(sweep):
    return CCW if sweep == CW else CW


def split(sector, d, sweep):
    """Narrow the sector on the far side of d relative to the sweep."""
    return split_cw(sector, d) if sweep == CW else split_ccw(sector, d)


def run_scan(exp, pid, edge, point, sector, sweep):
    """Drive one scan plus everything it spawns (iterative recursion)."""
    stack = [(pid, edge, point, sector, sweep, False)]
    while stack:
        if len(stack) > MAX_PENDING_SCANS:
            raise ScanDepthExceeded("scan recursion exceeded %d" % MAX_PENDING_SCANS)
        _scan_one(exp, stack, *stack.pop())


class _Cursor:
    """Walk position on a polygon boundary, exact point on a known edge.

    Normal form keeps the point anywhere on edge e except its far end,
    so the next vertex ahead is unambiguous for either sweep direction.
    """

    __slots__ = ("pts", "n", "edge", "point", "sweep")

    def __init__(self, pts, edge, point, sweep):
        self.pts = pts
        self.n = len(pts)
        self.edge = edge % self.n
        self.point = point
        self.sweep = sweep
        if sweep == CW:
            if point == pts[(self.edge + 1) % self.n]:
                self.edge = (self.edge + 1) % self.n
        else:
            if point == pts[self.edge]:
                self.edge = (self.edge - 1) % self.n

    def at_vertex(self):
        """Index of the vertex the cursor sits on, or None."""
        if self.point == self.pts[self.edge]:
            return self.edge
        if self.point == self.pts[(self.edge + 1) % self.n]:
            return (self.edge + 1) % self.n
        return None

    def next_vertex(self):
        if self.sweep == CW:
            return (self.edge + 1) % self.n
        return self.edge

    def advance(self):
        """Move the cursor onto the next vertex."""
        i = self.next_vertex()
        self.point = self.pts[i]
        if self.sweep == CW:
            self.edge = i
        else:
            self.edge = (i - 1) % self.n
        return i


def _scan_one(exp, stack, pid, edge, point, sector, sweep, include_start):
    env = exp.env
    u = exp.u_point
    pts = env.boundary(pid)
    came = 1 if sweep == CW else -1
    cur = _Cursor(pts, edge, point, sweep)

    origin = cur.point
    start_idx = cur.at_vertex() if include_start else None
    run_side = 0  # boundary side before a radial run, 0 when unknown
    guard = 2 * len(pts) + 4
    for _ in range(guard):
        if start_idx is not None:
            bi, B = start_idx, pts[start_idx]
            start_idx = None
        else:
            A = cur.point
            bi = cur.next_vertex()
            B = pts[bi]
            if A != origin and on_segment(A, B, origin):
                return  # swept once around the whole boundary
            if A != u:
                dA = sub(A, u)
                dB = sub(B, u)
                if A != B and on_segment(A, B, u):
                    return  # boundary runs through the expanding point
                ex = _sector_exit(u, sector, dA, A, dB, B)
                if ex is not None:
                    if exp.cfg.blocking:
                        _remove_covered(exp, dA, sub(ex, u), A, ex)
                    return
                if exp.cfg.blocking:
                    _remove_covered(exp, dA, dB, A, B)
            cur.advance()
        exp.stats.swept += 1
        exp.trace("scan", B)
        rec = env.record(pid, bi)
        if rec.on_outer_boundary:
            return
        if B == u:
            return

        w = sub(B, u)
        prev_pt = pts[(bi - 1) % len(pts)]
        next_pt = pts[(bi + 1) % len(pts)]
        sp = _sign(cross(w, sub(prev_pt, B)))
        sn = _sign(cross(w, sub(next_pt, B)))
        # Sweep-order sides of the neighbours.  A radial edge (sign 0
        # ahead) only pauses the sweep, so the side carried into the next
        # vertex is remembered instead of treated as a reversal.
        wp, wn = (sp, sn) if sweep == CW else (sn, sp)
        if wp == 0:
            wp = run_side
        run_side = wp if wn == 0 else -wn
        kind = None
        if wn == came and wp != -came:
            kind = "forward"
        elif wn == -came and wp == -came:
            kind = "backward"

        if rec.convexity == CONVEX and kind is not None:
            if kind == "forward" and (exp.cfg.skip or exp.cfg.bypass):
                res = _try_walk_past(exp, pid, bi, sector, sweep)
                if res is not None:
                    cur = _Cursor(pts, res[0], res[1], sweep)
                    if cur.at_vertex() is not None:
                        start_idx = cur.at_vertex()
                    run_side = 0
                    continue
            # A repeated direction is served from the expansion's cast
            # memo by shoot(), so recursing here costs no extra rays.
            hit, scale, _ = exp.shoot(w, to_ref=(pid, bi), tp=True)
            if hit.t >= scale:  # the turning point is visible
                wrap = opposite(sweep) if kind == "forward" else sweep
                exp.push_vertex((pid, bi), B, wrap)
                child = sweep if kind == "forward" else opposite(sweep)
                he, hpos = hit_position(exp, hit)
                stack.append(
                    (hit.polygon, he, hpos, split(sector, w, child), child, False)
                )
                sector = split(sector, w, sweep)
                continue
            he, hpos = hit_position(exp, hit)
            stack.append((hit.polygon, he, hpos, split_cw(sector, w), CW, False))
            stack.append((hit.polygon, he, hpos, split_ccw(sector, w), CCW, False))
            return
        if rec.convexity != CONVEX and exp.cfg.scan_mode == "forward":
            if kind == "forward":
                # the sweep reverses around solid material: round the
                # concave corner by splitting scans at the blocked ray
                hit, scale, _ = exp.shoot(w, to_ref=(pid, bi), tp=True)
                he, hpos = hit_position(exp, hit)
                stack.append((hit.polygon, he, hpos, split_cw(sector, w), CW, False))
                stack.append((hit.polygon, he, hpos, split_ccw(sector, w), CCW, False))
                return
    raise MalformedBoundary("scan looped on polygon %d" % pid)


def _sign(v):
    return (v > 0) - (v < 0)


def hit_position(exp, hit):
    """(edge index, exact point) where a blocked ray meets the boundary."""
    if hit.vertex is not None:
        vpid, vi = hit.vertex
        return vi, exp.env.vertex(vpid, vi)
    return hit.edge[1], hit.point()


def _sector_exit(u, F, dA, A, dB, B):
    """Earliest point of segment AB where the sweep leaves the sector."""
    if F.full:
        return None
    AB = sub(B, A)
    best_m = None
    best_x = None
    for dp in (F.ccw_pivot, F.cw_pivot):
        if arc_contains_strict(dA, dB, dp):
            den = cross(dp, AB)
            m = Fraction(cross(dA, dp), den)
            if best_m is None or m < best_m:
                best_m = m
                best_x = (A[0] + m * AB[0], A[1] + m * AB[1])
    if best_x is not None:
        return best_x
    if not F.contains(dB):
        return A
    return None


def _chain_depth(dA, dB, A, B, dT):
    """Parameter along dT where segment AB crosses it (target sits at 1),
    or None when the covered direction only grazes a radial step."""
    den = cross(dT, sub(B, A))
    if den != 0:
        return Fraction(cross(dA, sub(B, A)), den)
    if same_ray(dT, dA):
        return Fraction(dot(dA, dT), norm2(dT))
    if same_ray(dT, dB):
        return Fraction(dot(dB, dT), norm2(dT))
    return None


def _remove_covered(exp, dA, dB, A, B):
    """Blocking: drop targets the walked stretch provably occludes."""
    if cross(dA, dB) == 0:
        return  # a radial step occludes nothing by itself
    u = exp.u_point
    for tv in list(exp.targets):
        dT = sub(tv.point, u)
        if not arc_contains_inclusive(dA, dB, dT):
            continue
        s = _chain_depth(dA, dB, A, B, dT)
        if s is not None and s < 1:
            exp.remove_target(tv)


def _covers_clear_target(exp, dA, dB, A, B):
    """Bypass failure test: some target is swept but not occluded here.

    Guarded targets count too: their direct ray is dead, but a route that
    turns at the corner under consideration may still be their best.
    """
    u = exp.u_point
    radial = cross(dA, dB) == 0
    for tv in exp.targets + exp.guarded:
        dT = sub(tv.point, u)
        if radial:
            if same_ray(dT, dA):
                return True
            continue
        if not arc_contains_inclusive(dA, dB, dT):
            continue
        s = _chain_depth(dA, dB, A, B, dT)
        if s is None or s >= 1:
            return True
    return False


def _try_walk_past(exp, pid, ni, sector, sweep):
    """Skip or bypass a forward turning point without shooting at it.

    Walks on past the turning point watching for the boundary to cross
    back over the ray behind it; returns the resume position (edge,
    point) on success, or None when the ray must be shot after all.
    """
    env = exp.env
    u = exp.u_point
    pts = env.boundary(pid)
    N = pts[ni]
    if exp.cfg.skip:
        gn = exp.recorded_g((pid, ni))
        mode = "skip" if gn is not None and exp.g_u + dist(u, N) > gn else "bypass"
    else:
        mode = "bypass"
    if mode == "bypass" and not exp.cfg.bypass:
        return None

    dn = sub(N, u)
    cur = _Cursor(pts, ni if sweep == CW else (ni - 1) % len(pts), N, sweep)
    for _ in range(exp.cfg.skip_budget):
        A = cur.point
        bi = cur.next_vertex()
        B = pts[bi]
        dA = sub(A, u)
        dB = sub(B, u)
        if A != B and on_segment(A, B, u):
            return None
        if mode == "bypass" and _covers_clear_target(exp, dA, dB, A, B):
            return None
        ex = _sector_exit(u, sector, dA, A, dB, B)
        cross_at = _cross_beyond(u, dn, dA, A, dB, B)
        if ex is not None and (
            cross_at is None or _seg_param(A, B, ex) < _seg_param(A, B, cross_at)
        ):
            if exp.cfg.blocking:
                _remove_covered(exp, dA, sub(ex, u), A, ex)
            return None
        if exp.cfg.blocking:
            end = cross_at if cross_at is not None else B
            _remove_covered(exp, dA, sub(end, u), A, end)
        if cross_at is not None:
            if mode == "skip":
                exp.stats.skips += 1
            else:
                exp.stats.bypasses += 1
            return (cur.edge, cross_at)
        if B == N or B == u:
            return None
        if env.record(pid, bi).on_outer_boundary:
            return None
        exp.stats.swept += 1
        exp.trace("scan", B)
        cur.advance()
    return None


def _cross_beyond(u, dn, dA, A, dB, B):
    """Point where segment AB crosses the ray along dn strictly past the
    turning point (which sits at parameter 1), or None."""
    AB = sub(B, A)
    den = cross(dn, AB)
    if den == 0:
        # walking parallel to the ray; only a stretch along the ray line
        # itself can carry the walk past the turning point
        if cross(dn, dA) != 0 or dot(dn, dB) <= 0:
            return None
        return B if _ray_param(dn, dB) > 1 else None
    m = Fraction(cross(dA, dn), den)
    if m < 0 or m > 1:
        return None
    X = (A[0] + m * AB[0], A[1] + m * AB[1])
    dX = sub(X, u)
    if cross(dn, dX) != 0 or dot(dn, dX) <= 0:
        return None
    if _ray_param(dn, dX) > 1:
        return X
    return None


def _ray_param(dn, dX):
    return Fraction(dot(dn, dX), norm2(dn))


def _seg_param(A, B, X):
    AB = sub(B, A)
    AX = sub(X, A)
    if AB[0] != 0:
        return Fraction(AX[0], AB[0])
    return Fraction(AX[1], AB[1])
