import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from udncluster import (
    Network,
    NodeKind,
    Partition,
    PhysicalParams,
    Position,
    cluster_views,
    euclidean_distance,
    point_to_set_distance,
)

finite_coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_position_rejects_non_finite():
    with pytest.raises(ValueError):
        Position(float("nan"), 0.0)
    with pytest.raises(ValueError):
        Position(0.0, float("inf"))


def test_physical_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(transmit_power=0.0)
    with pytest.raises(ValueError):
        PhysicalParams(noise_power=-1.0)


def test_network_requires_bs_before_users(params):
    with pytest.raises(ValueError):
        # a user followed by a base station is not a canonical node order
        from udncluster import NetworkNode

        Network(
            nodes=(
                NetworkNode(0, NodeKind.USER, Position(0, 0)),
                NetworkNode(1, NodeKind.BASE_STATION, Position(1, 1)),
            ),
            params=params,
        )


def test_euclidean_distance_examples():
    assert euclidean_distance(Position(0, 0), Position(3, 4)) == 5.0
    assert euclidean_distance(Position(1, 1), Position(1, 1)) == 0.0
    assert euclidean_distance(Position(0, 0), Position(1, 0)) == 1.0


def test_point_to_set_distance_examples():
    assert point_to_set_distance(Position(0, 0), [Position(1, 0), Position(5, 0)]) == 1.0
    assert point_to_set_distance(Position(1, 0), [Position(1, 0), Position(5, 0)]) == 0.0
    assert point_to_set_distance(Position(0, 0), [Position(3, 4)]) == 5.0


def test_point_to_set_distance_rejects_empty():
    with pytest.raises(ValueError):
        point_to_set_distance(Position(0, 0), [])


@given(
    p=st.tuples(finite_coord, finite_coord),
    members=st.lists(st.tuples(finite_coord, finite_coord), min_size=1, max_size=8),
)
def test_point_to_set_is_min_over_members(p, members):
    point = Position(*p)
    positions = [Position(*m) for m in members]
    d = point_to_set_distance(point, positions)
    assert all(d <= euclidean_distance(point, q) for q in positions)
    assert any(math.isclose(d, euclidean_distance(point, q)) for q in positions)


def test_cluster_views_midpoint(tiny_network):
    part = Partition(num_clusters=1, idx=np.zeros(2, dtype=int))
    (view,) = cluster_views(tiny_network, part)
    assert view.n_bs == 1 and view.n_users == 1
    assert view.centroid == Position(1.5, 2.0)


def test_cluster_views_empty_cluster_flagged(tiny_network):
    part = Partition(num_clusters=2, idx=np.zeros(2, dtype=int))
    views = cluster_views(tiny_network, part)
    assert views[1].is_empty
    assert views[1].centroid is None
    assert views[0].n_bs == 1 and views[0].n_users == 1


def test_cluster_views_unit_square_centroid(params):
    net = Network.from_positions(
        np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [1.0, 1.0]]), params
    )
    part = Partition(num_clusters=1, idx=np.zeros(4, dtype=int))
    (view,) = cluster_views(net, part)
    assert view.centroid == Position(0.5, 0.5)


def test_cluster_views_rejects_mismatched_partition(tiny_network):
    with pytest.raises(ValueError):
        cluster_views(tiny_network, Partition(num_clusters=1, idx=np.zeros(5, dtype=int)))


def test_partition_bounds_checked():
    with pytest.raises(ValueError):
        Partition(num_clusters=2, idx=np.array([0, 2]))
    with pytest.raises(ValueError):
        Partition(num_clusters=0, idx=np.array([], dtype=int))


def test_partition_from_mapping_requires_dense_ids():
    with pytest.raises(ValueError):
        Partition.from_mapping(2, {0: 0, 2: 1})
    part = Partition.from_mapping(2, {0: 1, 1: 0})
    assert list(part.idx) == [1, 0]


def test_partition_idx_is_read_only():
    part = Partition(num_clusters=2, idx=np.array([0, 1]))
    with pytest.raises(ValueError):
        part.idx[0] = 1


@given(
    labels=st.lists(st.integers(min_value=0, max_value=3), min_size=4, max_size=24),
)
def test_membership_counts_are_exhaustive(labels):
    params = PhysicalParams()
    n = len(labels)
    m = n // 2
    rng = np.random.default_rng(0)
    net = Network.from_positions(rng.uniform(0, 10, (m, 2)), rng.uniform(0, 10, (n - m, 2)), params)
    part = Partition(num_clusters=4, idx=np.array(labels))
    views = cluster_views(net, part)
    assert sum(v.n_bs for v in views) == net.num_bs
    assert sum(v.n_users for v in views) == net.num_users
    seen = np.concatenate([np.concatenate([v.bs_ids, v.user_ids]) for v in views])
    assert sorted(seen.tolist()) == list(range(n))
