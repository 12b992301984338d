import math

import pytest
from hypothesis import given, strategies as st

from raypath.geometry import (
    CCW,
    COLLINEAR,
    CONCAVE,
    CONVEX,
    CW,
    STRAIGHT,
    AngledSector,
    arc_contains_inclusive,
    arc_contains_strict,
    cw_angle_key,
    dist,
    full_sector,
    on_segment,
    orientation,
    reduce_direction,
    same_ray,
    segments_intersect,
    split_ccw,
    split_cw,
    strictly_in_wedge,
    vertex_convexity,
)

nonzero_dir = st.tuples(
    st.integers(-50, 50), st.integers(-50, 50)
).filter(lambda d: d != (0, 0))


def test_orientation_signs():
    assert orientation((0, 0), (1, 0), (1, 1)) == CCW
    assert orientation((0, 0), (1, 0), (1, -1)) == CW
    assert orientation((0, 0), (1, 0), (3, 0)) == COLLINEAR
    assert orientation((0, 0), (2, 4), (1, 2)) == COLLINEAR


def test_reduce_direction():
    assert reduce_direction((4, -2)) == (2, -1)
    assert reduce_direction((0, 7)) == (0, 1)
    assert reduce_direction((-3, 0)) == (-1, 0)
    with pytest.raises(ValueError):
        reduce_direction((0, 0))


def test_same_ray():
    assert same_ray((2, 1), (6, 3))
    assert not same_ray((2, 1), (-2, -1))
    assert not same_ray((2, 1), (1, 2))


def test_vertex_convexity():
    # material left of the directed walk: left turns are convex corners
    assert vertex_convexity((0, 0), (2, 0), (2, 2)) == CONVEX
    assert vertex_convexity((0, 0), (2, 0), (2, -2)) == CONCAVE
    assert vertex_convexity((0, 0), (2, 0), (4, 0)) == STRAIGHT


def test_dist():
    assert dist((0, 0), (3, 4)) == 5.0


class TestAngledSector:
    def test_minor_arc(self):
        s = AngledSector((0, 1), (1, 0))  # the upper-right quadrant
        assert s.contains((1, 1))
        assert s.contains((0, 1)) and s.contains((1, 0))  # pivots included
        assert not s.contains((-1, 1))
        assert not s.contains((1, -1))
        assert not s.contains((-1, -1))

    def test_half_plane(self):
        s = AngledSector((0, 1), (0, -1))  # everything with x >= 0
        assert s.contains((1, 0))
        assert s.contains((0, 1)) and s.contains((0, -1))
        assert s.contains((1, 5)) and s.contains((1, -5))
        assert not s.contains((-1, 0))
        assert not s.contains((-1, 3))

    def test_reflex_arc(self):
        s = AngledSector((1, 0), (0, 1))  # everything but the open first quadrant
        assert s.contains((1, -1))
        assert s.contains((-1, -1))
        assert s.contains((-1, 1))
        assert not s.contains((1, 1))
        assert s.contains((1, 0)) and s.contains((0, 1))

    def test_zero_width_and_full(self):
        zero = AngledSector((1, 2), (1, 2))
        assert zero.contains((2, 4))
        assert not zero.contains((2, 5))
        assert not zero.contains((-1, -2))
        assert full_sector((1, 2)).contains((-1, -2))
        assert full_sector((1, 2)).contains((17, -3))

    def test_splits(self):
        s = AngledSector((0, 1), (0, -1))
        left = split_ccw(s, (1, 0))
        right = split_cw(s, (1, 0))
        assert left == AngledSector((0, 1), (1, 0))
        assert right == AngledSector((1, 0), (0, -1))
        assert left.contains((1, 1)) and not left.contains((1, -1))
        assert right.contains((1, -1)) and not right.contains((1, 1))

    def test_full_split_keeps_anchor(self):
        f = full_sector((1, 0))
        assert split_cw(f, (0, 1)) == AngledSector((0, 1), (1, 0))
        assert split_ccw(f, (0, 1)) == AngledSector((1, 0), (0, 1))
        # splitting a full sector along its own anchor keeps the full sweep
        assert split_cw(f, (3, 0)).full
        assert split_ccw(f, (3, 0)).full


def test_arc_contains():
    assert arc_contains_strict((0, 1), (1, 0), (1, 1))
    assert not arc_contains_strict((0, 1), (1, 0), (0, 1))
    assert arc_contains_inclusive((0, 1), (1, 0), (0, 1))
    # ccw pair sweeps the other way around
    assert arc_contains_strict((1, 0), (0, 1), (1, 1))
    assert not arc_contains_strict((1, 0), (0, 1), (1, -1))
    # radial: strict never, inclusive only along the shared ray
    assert not arc_contains_strict((1, 0), (2, 0), (1, 0))
    assert arc_contains_inclusive((1, 0), (2, 0), (3, 0))
    assert not arc_contains_inclusive((1, 0), (2, 0), (-1, 0))


def test_cw_angle_key_ordering():
    dirs = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)]
    got = sorted(dirs, key=cw_angle_key((0, 1)))
    assert got == dirs
    # same set from another reference rotates the cycle
    got = sorted(dirs, key=cw_angle_key((1, -1)))
    assert got == [(1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0)]


def test_strictly_in_wedge():
    # material sweeps clockwise from e_back to e_out; here one quadrant,
    # the corner of a counterclockwise square seen from its bottom-left
    assert strictly_in_wedge((0, 1), (1, 0), (1, 1))
    assert not strictly_in_wedge((0, 1), (1, 0), (1, -1))
    assert not strictly_in_wedge((0, 1), (1, 0), (-1, 1))
    assert not strictly_in_wedge((0, 1), (1, 0), (1, 0))  # grazing
    # reflex corner: three quadrants of material, free only up-right
    assert strictly_in_wedge((1, 0), (0, 1), (-1, 0))
    assert strictly_in_wedge((1, 0), (0, 1), (-1, -1))
    assert strictly_in_wedge((1, 0), (0, 1), (1, -1))
    assert not strictly_in_wedge((1, 0), (0, 1), (1, 1))
    assert not strictly_in_wedge((1, 0), (0, 1), (0, 1))  # grazing
    # straight run with material on the left
    assert strictly_in_wedge((-1, 0), (1, 0), (0, 1))
    assert not strictly_in_wedge((-1, 0), (1, 0), (0, -1))


def test_on_segment():
    assert on_segment((0, 0), (4, 4), (2, 2))
    assert on_segment((0, 0), (4, 4), (0, 0))
    assert not on_segment((0, 0), (4, 4), (5, 5))
    assert not on_segment((0, 0), (4, 4), (2, 3))


def test_segments_intersect():
    assert segments_intersect((0, 0), (4, 4), (0, 4), (4, 0))
    assert segments_intersect((0, 0), (4, 0), (2, 0), (6, 0))  # collinear overlap
    assert segments_intersect((0, 0), (4, 0), (4, 0), (6, 2))  # endpoint touch
    assert not segments_intersect((0, 0), (4, 0), (0, 1), (4, 1))
    assert not segments_intersect((0, 0), (1, 0), (2, 0), (3, 0))


@given(nonzero_dir)
def test_reduce_direction_idempotent(d):
    r = reduce_direction(d)
    assert reduce_direction(r) == r
    assert same_ray(d, r)


@given(nonzero_dir, nonzero_dir, nonzero_dir)
def test_orientation_antisymmetric(a, b, c):
    assert orientation(a, b, c) == -orientation(c, b, a)


@given(nonzero_dir, nonzero_dir)
def test_sector_includes_pivots(a, b):
    s = AngledSector(reduce_direction(a), reduce_direction(b))
    assert s.contains(a)
    assert s.contains(b)


@given(nonzero_dir, nonzero_dir, nonzero_dir)
def test_split_partitions_membership(a, b, d):
    """Any direction of a sector lands in at least one half of a split."""
    s = AngledSector(reduce_direction(a), reduce_direction(b))
    if not s.contains(d):
        return
    dd = reduce_direction(d)
    probe_cw = split_cw(s, dd)
    probe_ccw = split_ccw(s, dd)
    assert probe_cw.contains(d) and probe_ccw.contains(d)
