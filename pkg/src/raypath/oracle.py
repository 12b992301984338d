"""Reference shortest paths from an explicit visibility graph.

This is the slow, obviously-correct yardstick the engine is checked
against.  It never casts rays: every candidate sight line is tested by
brute force against all boundary edges, with a vectorized sign prefilter
deciding the easy cases and exact integer arithmetic settling anything
that grazes a vertex or runs along an edge.  Shortest paths then come
from Dijkstra over the graph on convex material corners.
"""
from __future__ import annotations

import heapq

import numpy as np

from .geometry import (
    CONVEX,
    cross,
    dist,
    on_segment,
    orientation,
    strictly_in_wedge,
    sub,
)


def segment_visible(env, p, q):
    """Exact test: does the closed segment pq stay in closed free space?

    Boundary contact is fine (free space is closed); the segment is
    blocked only where it enters the open interior of an obstacle or
    leaves through the enclosure.  Shares the wedge predicate with the
    engine but none of its ray machinery.
    """
    if p == q:
        return True
    d = sub(q, p)
    dback = sub(p, q)
    for pid in env.polygon_ids():
        pts = env.boundary(pid)
        n = len(pts)
        for i in range(n):
            a = pts[i]
            b = pts[(i + 1) % n]
            o1 = orientation(p, q, a)
            o2 = orientation(p, q, b)
            if o1 != o2 and o1 != 0 and o2 != 0:
                o3 = orientation(a, b, p)
                o4 = orientation(a, b, q)
                if o3 != o4 and o3 != 0 and o4 != 0:
                    return False
            if a == p:
                if strictly_in_wedge(sub(pts[i - 1], a), sub(b, a), d):
                    return False
            elif a == q:
                if strictly_in_wedge(sub(pts[i - 1], a), sub(b, a), dback):
                    return False
            elif o1 == 0 and on_segment(p, q, a):
                if strictly_in_wedge(sub(pts[i - 1], a), sub(b, a), d):
                    return False
            if a != p and b != p and on_segment(a, b, p):
                if cross(sub(b, a), d) > 0:
                    return False
            if a != q and b != q and on_segment(a, b, q):
                if cross(sub(b, a), dback) > 0:
                    return False
    return True


class VisibilityOracle:
    """Visibility graph over convex corners, queried with Dijkstra."""

    def __init__(self, env):
        self.env = env
        self.nodes = []
        for pid in env.polygon_ids():
            for i in range(env.size(pid)):
                if env.record(pid, i).convexity == CONVEX:
                    self.nodes.append(env.vertex(pid, i))
        edges_a = []
        edges_b = []
        self._ends_at = {}
        for k, (pid, i, a, b) in enumerate(env.edges()):
            edges_a.append(a)
            edges_b.append(b)
            self._ends_at.setdefault(a, []).append(k)
            self._ends_at.setdefault(b, []).append(k)
        self._A = np.array(edges_a, dtype=np.int64).reshape(-1, 2)
        self._B = np.array(edges_b, dtype=np.int64).reshape(-1, 2)
        self._adj = self._build_graph()

    # -- visibility -----------------------------------------------------

    def _incident_mask(self, p):
        mask = np.zeros(len(self._A), dtype=bool)
        for k in self._ends_at.get(p, ()):
            mask[k] = True
        return mask

    def _enters_material(self, p, d):
        """Does a segment leaving p along d dive straight into solid?"""
        for pid, i in self.env.vertices_at(p):
            pts = self.env.boundary(pid)
            eb = sub(pts[i - 1], p)
            eo = sub(pts[(i + 1) % len(pts)], p)
            if strictly_in_wedge(eb, eo, d):
                return True
        return False

    def _batch_visible(self, p, points):
        """Boolean visibility of integer point p against a point list."""
        p = tuple(p)
        k = len(points)
        if k == 0:
            return np.zeros(0, dtype=bool)
        m = len(self._A)
        out = np.ones(k, dtype=bool)
        if m == 0:
            return out
        P = np.array(p, dtype=np.int64)
        Q = np.array(points, dtype=np.int64).reshape(-1, 2)
        A, B = self._A, self._B
        dq = Q - P  # (k, 2)
        ap = (A - P).T  # (2, m)
        bp = (B - P).T
        o1 = np.sign(dq[:, 0:1] * ap[1] - dq[:, 1:2] * ap[0])  # (k, m)
        o2 = np.sign(dq[:, 0:1] * bp[1] - dq[:, 1:2] * bp[0])
        e = B - A  # (m, 2)
        pa = P - A
        o3 = np.sign(e[:, 0] * pa[:, 1] - e[:, 1] * pa[:, 0])  # (m,)
        qa = Q[:, None, :] - A[None, :, :]  # (k, m, 2)
        o4 = np.sign(e[None, :, 0] * qa[:, :, 1] - e[None, :, 1] * qa[:, :, 0])
        blocked = ((o1 * o2 < 0) & (o3[None, :] * o4 < 0)).any(axis=1)
        # a zero sign on an edge not incident to either endpoint means
        # grazing contact that sign comparison alone cannot settle
        zeros = (o1 == 0) | (o2 == 0) | (o3[None, :] == 0) | (o4 == 0)
        zeros &= ~self._incident_mask(p)[None, :]
        out = ~blocked
        for j in range(k):
            if not out[j]:
                continue
            q = tuple(points[j])
            if q == p:
                continue
            if zeros[j].any() and (zeros[j] & ~self._incident_mask(q)).any():
                out[j] = segment_visible(self.env, p, q)
            elif self._enters_material(p, sub(q, p)) or self._enters_material(
                q, sub(p, q)
            ):
                # interior diagonal between corners of one polygon: no
                # crossing signs anywhere, yet the segment runs in solid
                out[j] = False
        return out

    def _build_graph(self):
        n = len(self.nodes)
        adj = [[] for _ in range(n)]
        for i in range(n):
            vis = self._batch_visible(self.nodes[i], self.nodes[i + 1 :])
            for off in np.nonzero(vis)[0]:
                j = i + 1 + int(off)
                w = dist(self.nodes[i], self.nodes[j])
                adj[i].append((j, w))
                adj[j].append((i, w))
        return adj

    # -- queries ---------------------------------------------------------

    def shortest(self, s, t):
        """Exact-visibility shortest path length from s to t, or None."""
        return self.shortest_multi(s, [t])[0]

    def shortest_multi(self, s, targets):
        """Lengths from s to each target (None where unreachable)."""
        s = tuple(s)
        targets = [tuple(t) for t in targets]
        n = len(self.nodes)
        sid = n
        s_edges = []
        for j in np.nonzero(self._batch_visible(s, self.nodes))[0]:
            s_edges.append((int(j), dist(s, self.nodes[int(j)])))
        into_target = {}  # graph node -> [(target id, weight)]
        for k, t in enumerate(targets):
            tid = n + 1 + k
            if t == s or bool(self._batch_visible(s, [t])[0]):
                s_edges.append((tid, dist(s, t)))
            for j in np.nonzero(self._batch_visible(t, self.nodes))[0]:
                into_target.setdefault(int(j), []).append(
                    (tid, dist(t, self.nodes[int(j)]))
                )

        results = [None] * len(targets)
        remaining = len(targets)
        best = {sid: 0.0}
        done = set()
        heap = [(0.0, sid)]
        while heap and remaining:
            g, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            if u > sid:
                results[u - sid - 1] = g
                remaining -= 1
                continue
            if u == sid:
                nbrs = s_edges
            else:
                nbrs = self._adj[u] + into_target.get(u, [])
            for v, w in nbrs:
                ng = g + w
                if v not in done and (v not in best or ng < best[v]):
                    best[v] = ng
                    heapq.heappush(heap, (ng, v))
        return results
