import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbsim.association import associate, associate_grid
from dbsim.model import GroundNode, Point2D


def brute_force(nodes, drones, r):
    """Plain loops: nearest drone (lowest id on ties) if within r, else -1."""
    labels = []
    for gx, gy in nodes:
        best, best_d2 = -1, None
        for i, (dx, dy) in enumerate(drones):
            ex, ey = gx - dx, gy - dy
            d2 = ex * ex + ey * ey
            if best_d2 is None or d2 < best_d2:
                best, best_d2 = i, d2
        labels.append(best if best_d2 is not None and best_d2 <= r * r else -1)
    return labels


def test_nearest_within_radius():
    a = associate([(0.0, 0.0)], [(1.0, 0.0), (5.0, 0.0)], 2.0)
    assert a.node_to_drone.tolist() == [0]
    assert a.per_drone_count.tolist() == [1, 0]


def test_tie_goes_to_lowest_id():
    for f in (associate, associate_grid):
        a = f([(3.0, 0.0)], [(1.0, 0.0), (5.0, 0.0)], 2.0)
        assert a.node_to_drone.tolist() == [0]
        assert a.per_drone_count.tolist() == [1, 0]


def test_out_of_range_is_unassigned():
    a = associate([(10.0, 10.0)], [(1.0, 0.0), (5.0, 0.0)], 2.0)
    assert a.node_to_drone.tolist() == [-1]
    assert a.per_drone_count.tolist() == [0, 0]


def test_accepts_domain_objects():
    nodes = [GroundNode(0, Point2D(0.0, 0.0)), GroundNode(1, Point2D(9.0, 9.0))]
    a = associate(nodes, [Point2D(1.0, 1.0)], 2.0)
    assert a.node_to_drone.tolist() == [0, -1]
    assert a.per_drone_members == [{0}]


def test_empty_inputs():
    pts = np.random.default_rng(0).random((20, 2))
    for f in (associate, associate_grid):
        a = f(pts, [], 1.0)
        assert np.all(a.node_to_drone == -1) and len(a.per_drone_count) == 0
        b = f(np.empty((0, 2)), [(0.5, 0.5)], 1.0)
        assert b.per_drone_count.tolist() == [0]


def test_single_drone_covers_everything():
    pts = np.random.default_rng(1).random((300, 2)) * 100
    a = associate_grid(pts, [(50.0, 50.0)], 100 * np.sqrt(2))
    assert np.all(a.node_to_drone == 0)


def test_grid_matches_dense_small_instances():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n_g = int(rng.integers(0, 1001))
        n_d = int(rng.integers(1, 12))
        L = float(rng.uniform(10, 1000))
        r = float(rng.uniform(0.5, L / 3))
        nodes = rng.random((n_g, 2)) * L
        drones = rng.random((n_d, 2)) * L
        cell = float(rng.uniform(0.2, 2.0)) * r
        assert associate_grid(nodes, drones, r, cell) == associate(nodes, drones, r)


def test_dense_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(100):
        nodes = rng.random((int(rng.integers(1, 60)), 2)) * 50
        drones = rng.random((int(rng.integers(1, 6)), 2)) * 50
        assert associate(nodes, drones, 8.0).node_to_drone.tolist() == brute_force(
            nodes.tolist(), drones.tolist(), 8.0
        )


def test_boundary_distance_counts_as_connected():
    # 3-4-5: distance exactly 5
    for f in (associate, associate_grid):
        assert f([(3.0, 4.0)], [(0.0, 0.0)], 5.0).node_to_drone.tolist() == [0]


def test_bad_cell_size():
    with pytest.raises(ValueError):
        associate_grid([(0.0, 0.0)], [(0.0, 0.0)], 1.0, cell_size=0.0)


coords = st.floats(0, 100, allow_nan=False, allow_infinity=False)
points = st.lists(st.tuples(coords, coords), max_size=40)


@settings(max_examples=150, deadline=None)
@given(nodes=points, drones=st.lists(st.tuples(coords, coords), min_size=1, max_size=6),
       r=st.floats(0.5, 60), extra=st.tuples(coords, coords))
def test_gates_and_monotonicity(nodes, drones, r, extra):
    nodes_a = np.array(nodes, dtype=float).reshape(-1, 2)
    drones_a = np.array(drones, dtype=float)
    a = associate_grid(nodes_a, drones_a, r)
    assert a == associate(nodes_a, drones_a, r)
    assert a.per_drone_count.sum() <= len(nodes)
    assert [len(m) for m in a.per_drone_members] == a.per_drone_count.tolist()
    for g, d in enumerate(a.node_to_drone):
        if d < 0:
            continue
        d2 = ((drones_a - nodes_a[g]) ** 2).sum(axis=1)
        assert d2[d] <= r * r
        assert d2[d] == d2.min()
    more = associate_grid(nodes_a, np.vstack([drones_a, [extra]]), r)
    assert more.total >= a.total
