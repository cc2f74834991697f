"""Shared domain types: nodes, networks, partitions and per-cluster views."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


class NodeKind(Enum):
    BASE_STATION = "bs"
    USER = "user"


@dataclass(frozen=True)
class Position:
    """A point in the plane, in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"position coordinates must be finite, got ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class NetworkNode:
    """A base station or user terminal, identified by a dense integer id."""

    id: int
    kind: NodeKind
    position: Position


@dataclass(frozen=True)
class PhysicalParams:
    """Radio parameters: uplink transmit power, noise power, path-loss exponent
    and the saturation distance below which the large-scale gain stops growing."""

    transmit_power: float = 1.0
    noise_power: float = 0.09
    path_loss_alpha: float = 4.0
    distance_threshold: float = 5.0

    def __post_init__(self):
        for name in ("transmit_power", "noise_power", "path_loss_alpha", "distance_threshold"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class Network:
    """An immutable set of nodes plus radio parameters.

    Node ids are dense and positional: base stations occupy ids 0..M-1 and
    users M..M+K-1, so id order is the canonical iteration order and array
    indices double as node ids.
    """

    nodes: tuple[NetworkNode, ...]
    params: PhysicalParams

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        seen_user = False
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise ValueError(f"node ids must be dense and ascending: index {i} holds id {node.id}")
            if node.kind is NodeKind.USER:
                seen_user = True
            elif seen_user:
                raise ValueError("base stations must precede users in the node list")

    @classmethod
    def from_positions(
        cls,
        bs_xy: np.ndarray,
        user_xy: np.ndarray,
        params: PhysicalParams,
    ) -> "Network":
        bs_xy = np.atleast_2d(np.asarray(bs_xy, dtype=float)) if len(bs_xy) else np.empty((0, 2))
        user_xy = np.atleast_2d(np.asarray(user_xy, dtype=float)) if len(user_xy) else np.empty((0, 2))
        nodes = [
            NetworkNode(i, NodeKind.BASE_STATION, Position(float(x), float(y)))
            for i, (x, y) in enumerate(bs_xy)
        ]
        m = len(nodes)
        nodes += [
            NetworkNode(m + i, NodeKind.USER, Position(float(x), float(y)))
            for i, (x, y) in enumerate(user_xy)
        ]
        return cls(nodes=tuple(nodes), params=params)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @cached_property
    def num_bs(self) -> int:
        return sum(1 for n in self.nodes if n.kind is NodeKind.BASE_STATION)

    @property
    def num_users(self) -> int:
        return self.num_nodes - self.num_bs

    @cached_property
    def positions(self) -> np.ndarray:
        """(num_nodes, 2) array of coordinates in node-id order."""
        out = np.array([[n.position.x, n.position.y] for n in self.nodes], dtype=float)
        out = out.reshape(self.num_nodes, 2)
        out.setflags(write=False)
        return out

    @property
    def bs_positions(self) -> np.ndarray:
        return self.positions[: self.num_bs]

    @property
    def user_positions(self) -> np.ndarray:
        return self.positions[self.num_bs :]


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to exactly one of ``num_clusters`` clusters.

    ``idx[node_id]`` is the cluster id, so exhaustiveness and disjointness are
    structural; validity against a concrete network is checked by
    :func:`validate_partition`.
    """

    num_clusters: int
    idx: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.idx, dtype=np.int64).copy()
        if arr.ndim != 1:
            raise ValueError("partition index must be one-dimensional")
        if self.num_clusters < 1:
            raise ValueError("need at least one cluster")
        if arr.size and (arr.min() < 0 or arr.max() >= self.num_clusters):
            raise ValueError(f"cluster ids must lie in [0, {self.num_clusters})")
        arr.setflags(write=False)
        object.__setattr__(self, "idx", arr)

    @classmethod
    def from_mapping(cls, num_clusters: int, mapping: Mapping[int, int]) -> "Partition":
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError("mapping must cover node ids 0..n-1 exactly once")
        arr = np.array([mapping[i] for i in range(len(mapping))], dtype=np.int64)
        return cls(num_clusters=num_clusters, idx=arr)

    @property
    def num_nodes(self) -> int:
        return int(self.idx.size)

    def members(self, cluster_id: int) -> np.ndarray:
        """Node ids assigned to ``cluster_id``, ascending."""
        return np.flatnonzero(self.idx == cluster_id)

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.idx, minlength=self.num_clusters)


def validate_partition(network: Network, partition: Partition) -> None:
    if partition.num_nodes != network.num_nodes:
        raise ValueError(
            f"partition covers {partition.num_nodes} nodes, network has {network.num_nodes}"
        )


@dataclass(frozen=True)
class ClusterView:
    """Materialized membership of one cluster: which base stations and users it
    holds, and the joint centroid of all member positions (``None`` when the
    cluster is empty)."""

    cluster_id: int
    bs_ids: np.ndarray
    user_ids: np.ndarray
    centroid: Position | None

    def __post_init__(self):
        for name in ("bs_ids", "user_ids"):
            arr = np.asarray(getattr(self, name), dtype=np.int64).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_bs(self) -> int:
        return int(self.bs_ids.size)

    @property
    def n_users(self) -> int:
        return int(self.user_ids.size)

    @property
    def is_empty(self) -> bool:
        return self.n_bs == 0 and self.n_users == 0

    @property
    def is_degenerate(self) -> bool:
        """True when the cluster cannot carry traffic (no BS or no user)."""
        return self.n_bs == 0 or self.n_users == 0


def cluster_views(network: Network, partition: Partition) -> list[ClusterView]:
    """Split a network according to a partition, one view per cluster id."""
    validate_partition(network, partition)
    pos = network.positions
    m = network.num_bs
    views = []
    for cid in range(partition.num_clusters):
        ids = partition.members(cid)
        bs_ids = ids[ids < m]
        user_ids = ids[ids >= m]
        if ids.size:
            cx, cy = pos[ids].mean(axis=0)
            centroid = Position(float(cx), float(cy))
        else:
            centroid = None
        views.append(ClusterView(cluster_id=cid, bs_ids=bs_ids, user_ids=user_ids, centroid=centroid))
    return views


def euclidean_distance(p: Position, q: Position) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def point_to_set_distance(p: Position, members: Sequence[Position] | Iterable[Position]) -> float:
    """Minimum Euclidean distance from ``p`` to a nonempty set of positions."""
    members = list(members)
    if not members:
        raise ValueError("point-to-set distance needs a nonempty member set")
    return min(euclidean_distance(p, q) for q in members)
