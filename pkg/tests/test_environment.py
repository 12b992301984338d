import pytest

from raypath import (
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
from raypath.environment import CannotRemoveEnclosure, shoelace2
from raypath.geometry import CONCAVE, CONVEX


def test_storage_orientation(box_square):
    # material left of directed edges: enclosure clockwise, obstacles ccw
    assert shoelace2(box_square.boundary(ENCLOSURE_ID)) < 0
    (pid,) = box_square.obstacle_ids()
    assert shoelace2(box_square.boundary(pid)) > 0
    # the same polygons handed over in the opposite winding store the same
    env2 = Environment([(0, 10), (10, 10), (10, 0), (0, 0)])
    assert shoelace2(env2.boundary(ENCLOSURE_ID)) < 0
    env2.insert_obstacle([(4, 6), (6, 6), (6, 4), (4, 4)])
    assert shoelace2(env2.boundary(1)) > 0


def test_convexity_records(box_square):
    # every corner of a rectangular enclosure is a material corner seen
    # from inside, hence concave for path purposes
    for i in range(box_square.size(ENCLOSURE_ID)):
        rec = box_square.record(ENCLOSURE_ID, i)
        assert rec.convexity == CONCAVE
        assert rec.on_outer_boundary
    (pid,) = box_square.obstacle_ids()
    for i in range(box_square.size(pid)):
        assert box_square.record(pid, i).convexity == CONVEX


def test_notched_enclosure_has_convex_corner():
    env = Environment([(0, 0), (10, 0), (10, 10), (6, 10), (6, 6), (4, 6), (4, 10), (0, 10)])
    kinds = {env.vertex(ENCLOSURE_ID, i): env.record(ENCLOSURE_ID, i).convexity
             for i in range(env.size(ENCLOSURE_ID))}
    # the notch mouth corners jut into free space
    assert kinds[(6, 6)] == CONVEX
    assert kinds[(4, 6)] == CONVEX
    assert kinds[(0, 0)] == CONCAVE
    assert not env.record(ENCLOSURE_ID, list(kinds).index((6, 6))).on_outer_boundary


def test_classify_point(box_square):
    assert box_square.classify_point((2, 2)) == "free"
    assert box_square.classify_point((5, 5)) == "obstacle"
    assert box_square.classify_point((4, 5)) == "boundary"
    assert box_square.classify_point((4, 4)) == "boundary"
    assert box_square.classify_point((0, 3)) == "boundary"
    assert box_square.classify_point((-1, 3)) == "outside"
    assert box_square.classify_point((11, 11)) == "outside"


def test_insert_validation(box_square):
    with pytest.raises(IntersectsExisting):
        box_square.insert_obstacle([(5, 5), (9, 5), (9, 9)])  # crosses the block
    with pytest.raises(IntersectsExisting):
        box_square.insert_obstacle([(6, 6), (8, 6), (8, 8)])  # corner contact
    with pytest.raises(IntersectsExisting):
        box_square.insert_obstacle([(3, 3), (7, 3), (7, 7), (3, 7)])  # swallows it
    with pytest.raises(OutsideEnclosure):
        box_square.insert_obstacle([(8, 8), (12, 8), (12, 12)])  # leaves the box
    with pytest.raises(OutsideEnclosure):
        box_square.insert_obstacle([(20, 20), (22, 20), (22, 22)])  # fully outside
    with pytest.raises(DegeneratePolygon):
        box_square.insert_obstacle([(1, 1), (2, 2)])
    with pytest.raises(DegeneratePolygon):
        box_square.insert_obstacle([(1, 1), (3, 1), (2, 2), (2, 0)])  # bowtie
    with pytest.raises(DegeneratePolygon):
        box_square.insert_obstacle([(1, 1), (3, 1), (5, 1)])  # zero area
    # nothing above may have changed the map
    assert box_square.obstacle_ids() == [1]
    assert box_square.revision == 1


def test_revision_counts_successful_edits(box_square):
    assert box_square.revision == 1
    pid = box_square.insert_obstacle([(1, 8), (2, 8), (2, 9)])
    assert box_square.revision == 2
    box_square.remove_obstacle(pid)
    assert box_square.revision == 3
    with pytest.raises(UnknownId):
        box_square.remove_obstacle(pid)
    with pytest.raises(CannotRemoveEnclosure):
        box_square.remove_obstacle(ENCLOSURE_ID)
    assert box_square.revision == 3


def test_vertices_at_tracks_removal(box_square):
    pid = box_square.insert_obstacle([(1, 8), (2, 8), (2, 9)])
    assert (pid, 0) in box_square.vertices_at((1, 8))
    box_square.remove_obstacle(pid)
    assert box_square.vertices_at((1, 8)) == ()


def test_polygon_map_round_trip(box_square):
    text = dump_polygon_map(box_square)
    env2 = load_polygon_map(text)
    assert env2.polygon_ids() == box_square.polygon_ids()
    for pid in env2.polygon_ids():
        assert env2.boundary(pid) == box_square.boundary(pid)


def test_polygon_map_errors():
    with pytest.raises(MapError):
        load_polygon_map("O 1 1 2 1 2 2\n")  # no enclosure
    with pytest.raises(MapError):
        load_polygon_map("E 0 0 9 0 9\n")  # odd coordinate count
    with pytest.raises(MapError):
        load_polygon_map("E 0 0 9 0 9 9\nX 1 2 3 4 5 6\n")
    with pytest.raises(MapError):
        load_polygon_map("E 0 0 9 0 nine 9\n")
    loaded = load_polygon_map("# comment\n\nE 0 0 9 0 9 9\n")
    assert loaded.size(ENCLOSURE_ID) == 3


GRID_PINCH = """\
type octile
height 6
width 8
map
........
..@@....
..@@....
....@...
........
........
"""

GRID_POCKET = """\
type octile
height 7
width 9
map
.........
..@@@@@..
..@...@..
..@.@.@..
..@...@..
..@@@@@..
.........
"""

GRID_BORDER = """\
type octile
height 5
width 7
map
@@.....
@......
....@..
...@@..
.......
"""


def test_grid_map_basic():
    env = load_grid_map(GRID_PINCH)
    assert env.bbox() == (0, 0, 8, 6)
    # one 2x2 block and one unit block touching it corner to corner
    assert len(env.obstacle_ids()) == 2
    sizes = sorted(env.size(pid) for pid in env.obstacle_ids())
    assert sizes == [4, 8]  # every grid corner is kept as a vertex
    assert env.classify_point((3, 4)) == "obstacle"
    assert env.classify_point((1, 1)) == "free"


def test_grid_map_culls_sealed_pocket():
    env = load_grid_map(GRID_POCKET)
    # the pocket inside the ring is unreachable, so it is filled in
    assert len(env.obstacle_ids()) == 1
    assert env.classify_point((4, 3)) == "obstacle"
    assert env.classify_point((1, 1)) == "free"


def test_grid_map_merges_border_blocks():
    env = load_grid_map(GRID_BORDER)
    # the top-left blocked cells join the outer boundary instead of
    # becoming an obstacle; the inner L of three cells stays one loop
    assert len(env.obstacle_ids()) == 1
    assert env.size(env.obstacle_ids()[0]) == 8
    enc = env.boundary(ENCLOSURE_ID)
    assert len(enc) == 24
    assert (1, 4) in enc  # staircase corner where the blocks were cut away
    assert shoelace2(enc) < 0


def test_grid_map_pinch_shares_corner():
    env = load_grid_map(GRID_PINCH)
    a, b = env.obstacle_ids()
    shared = set(env.boundary(a)) & set(env.boundary(b))
    assert shared == {(4, 3)}


def test_grid_map_round_trips_through_polygon_text():
    env = load_grid_map(GRID_BORDER)
    env2 = load_polygon_map(dump_polygon_map(env))
    for pid in env.polygon_ids():
        assert env2.boundary(pid) == env.boundary(pid)


def test_grid_map_errors():
    with pytest.raises(MapError):
        load_grid_map("height 2\nwidth 2\nmap\n..\n")  # missing row
    with pytest.raises(MapError):
        load_grid_map("map\n..\n..\n")  # no size header
    with pytest.raises(MapError):
        load_grid_map("height 2\nwidth 2\nmap\n..\n.?\n")  # unknown cell
    with pytest.raises(MapError):
        load_grid_map("height 1\nwidth 2\n..\n")  # no map line
