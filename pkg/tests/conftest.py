import random

import pytest

from raypath import Environment, MapError


@pytest.fixture
def empty_box():
    """8x8 box with nothing in it."""
    return Environment([(0, 0), (8, 0), (8, 8), (0, 8)])


@pytest.fixture
def box_square():
    """2x2 block centered in a 10x10 box.

    The query (2,5) -> (8,5) must detour around the block for a length
    of 2 + 2*sqrt(5), with two routes tied by symmetry.
    """
    env = Environment([(0, 0), (10, 0), (10, 10), (0, 10)])
    env.insert_obstacle([(4, 4), (6, 4), (6, 6), (4, 6)])
    return env


@pytest.fixture
def bent_corridor():
    """The walkthrough map: a hooked wall forcing s around d, c, D, E.

    The enclosure doubles back on itself to form a narrow hook, and one
    slanted block sits in the wide part.  Frozen expectations:

      length((6,11) -> (27,9)) = sqrt(20)+sqrt(34)+sqrt(17)+4+sqrt(98)
      waypoints (6,11), (10,9), (15,6), (16,2), (20,2), (27,9)
      expansion order (10,9), (15,6), (8,5), (13,3), (16,2), (20,2)
    """
    env = Environment(
        [(0, 20), (18, 20), (18, 8), (16, 8), (16, 2), (20, 2),
         (20, 20), (40, 20), (40, 0), (0, 0)]
    )
    env.insert_obstacle([(8, 5), (13, 3), (15, 6), (10, 9)])
    return env


def comb_env(seed):
    """Comb-shaped obstacles: long bases with teeth, heavy on concave
    corners, which is what the skip/bypass/blocking machinery feeds on."""
    rng = random.Random(seed)
    env = Environment([(0, 0), (60, 0), (60, 40), (0, 40)])
    placed = 0
    for _ in range(60):
        if placed >= 4:
            break
        x0 = rng.randint(4, 30)
        y0 = rng.randint(4, 30)
        w = rng.randint(10, 24)
        base = rng.randint(2, 4)
        if x0 + w > 56:
            continue
        pts = [(x0, y0), (x0 + w, y0), (x0 + w, y0 + base)]
        x = x0 + w
        while x - 4 > x0:
            x -= rng.randint(2, 4)
            h = rng.randint(2, 8)
            x2 = max(x0 + 1, x - rng.randint(1, 3))
            pts += [(x, y0 + base), (x, y0 + base + h), (x2, y0 + base + h), (x2, y0 + base)]
            x = x2
        pts.append((x0, y0 + base))
        try:
            env.insert_obstacle(pts)
            placed += 1
        except MapError:
            continue
    return env


def assert_close(got, want, rel=1e-9):
    """Engine-vs-oracle comparison used throughout: None must agree,
    numbers must agree to a relative tolerance."""
    if want is None or got is None:
        assert got is None and want is None, (got, want)
        return
    assert abs(got - want) <= rel * max(1.0, want), (got, want)
