"""Random test environments: star-shaped obstacles in a rectangular box."""
from __future__ import annotations

import math
import random

from .environment import Environment, MapError


def random_obstacle(rng, cx, cy, rmin, rmax):
    """Integer polygon, star shaped around (cx, cy) before rounding."""
    k = rng.randint(3, 8)
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
    pts = []
    for a in angles:
        r = rng.uniform(rmin, rmax)
        p = (cx + round(r * math.cos(a)), cy + round(r * math.sin(a)))
        if not pts or p != pts[-1]:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    return pts


def random_environment(width, height, obstacles, seed):
    """Box enclosure with up to `obstacles` disjoint random polygons.

    Rounding or crowding can make a candidate invalid or overlapping;
    those are simply rejected and retried, so dense requests may place
    fewer obstacles than asked.
    """
    env = Environment([(0, 0), (width, 0), (width, height), (0, height)])
    rng = random.Random(seed)
    placed = 0
    for _ in range(200 * obstacles):
        if placed >= obstacles:
            break
        rmax = rng.randint(2, max(3, min(width, height) // 10))
        cx = rng.randint(rmax + 1, width - rmax - 1)
        cy = rng.randint(rmax + 1, height - rmax - 1)
        pts = random_obstacle(rng, cx, cy, max(1.5, rmax / 2), rmax)
        if len(pts) < 3:
            continue
        try:
            env.insert_obstacle(pts)
        except MapError:
            continue
        placed += 1
    return env, rng


def random_free_point(env, rng):
    x0, y0, x1, y1 = env.bbox()
    while True:
        p = (rng.randint(x0, x1), rng.randint(y0, y1))
        if env.classify_point(p) == "free":
            return p
