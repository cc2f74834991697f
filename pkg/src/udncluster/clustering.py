"""Network decomposition methods.

Three ways to split a network into clusters:

* ``cellular_partition``: one cluster per base station, users follow their
  nearest base station;
* ``bs_clustering_partition``: k-means++ over base station positions only,
  users again follow their nearest base station;
* ``cgn_refine``: start from a k-means++ split of all nodes (base stations
  and users jointly) and iteratively move nodes so the per-cluster sum
  capacities even out, aiming to raise the worst cluster.

The refinement alternates two geometric moves while the capacity spread
(C_max - C_min) exceeds a threshold: the node closest to the worst cluster
joins it, and the node of the best cluster farthest from that cluster's
centroid is handed to its nearest other cluster. Capacities are re-evaluated
on a shared fading batch (common random numbers) for the clusters a move
touched; all tie-breaks go to the lowest node id, then the lowest cluster id,
so a run is bit-reproducible. There is no termination guarantee, so the loop
is capped and the best partition seen (highest C_min, then smallest spread)
is returned when the cap is hit.

``exhaustive_maxmin`` solves the max-min problem exactly at toy scale by
enumerating set partitions and serves as the test oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .capacity import CapacityEvaluator
from .channel import FadingBatch
from .model import Network, Partition, Position, validate_partition


@dataclass(frozen=True)
class RefinementConfig:
    """Stopping rule and guards for the capacity-equalizing refinement."""

    delta: float = 0.2
    max_iterations: int = 5000
    min_cluster_size: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.min_cluster_size < 1:
            raise ValueError("min_cluster_size must be at least 1")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    c_min: float
    c_max: float
    spread: float
    moved: tuple[int, ...]


@dataclass(frozen=True)
class RefinementTrace:
    """What the refinement did: the initial state, one record per executed
    iteration, whether the spread target was reached, and which iteration
    produced the best partition (0 means the initial one)."""

    initial: IterationRecord
    steps: tuple[IterationRecord, ...]
    converged: bool
    best_iteration: int

    @property
    def num_iterations(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> IterationRecord:
        return self.steps[-1] if self.steps else self.initial

    @property
    def best_c_min_seen(self) -> float:
        return max([self.initial.c_min] + [r.c_min for r in self.steps])


def _as_xy(points) -> np.ndarray:
    if len(points) and isinstance(points[0], Position):
        return np.array([[p.x, p.y] for p in points], dtype=float)
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be (n, 2) coordinates or a sequence of Position")
    return arr


def kmeans_pp(points, num_clusters: int, seed: int, max_iterations: int = 300) -> Partition:
    """k-means++ seeding followed by Lloyd iterations until assignments stop
    changing. Empty clusters are re-seeded from the point farthest from its
    current center, so the output never has an empty cluster."""
    xy = _as_xy(points)
    n = len(xy)
    if num_clusters < 1:
        raise ValueError("need at least one cluster")
    if num_clusters > n:
        raise ValueError(f"cannot split {n} points into {num_clusters} clusters")
    rng = np.random.default_rng(seed)

    centers = np.empty((num_clusters, 2))
    chosen = [int(rng.integers(n))]
    centers[0] = xy[chosen[0]]
    d2 = ((xy - centers[0]) ** 2).sum(axis=1)
    for i in range(1, num_clusters):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # every point coincides with a chosen center (duplicate inputs);
            # fall back to the lowest unused index to stay deterministic
            idx = next(j for j in range(n) if j not in chosen)
        chosen.append(idx)
        centers[i] = xy[idx]
        d2 = np.minimum(d2, ((xy - centers[i]) ** 2).sum(axis=1))

    labels = None
    for _ in range(max_iterations):
        dist = ((xy[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = dist.argmin(axis=1)
        for c in range(num_clusters):
            if not (new == c).any():
                # steal the farthest point, but never the last member of
                # another cluster, so the reseed cannot cascade empties
                sizes = np.bincount(new, minlength=num_clusters)
                eligible = np.flatnonzero(sizes[new] > 1)
                far = int(eligible[dist[eligible, new[eligible]].argmax()])
                centers[c] = xy[far]
                new[far] = c
                dist[:, c] = ((xy - centers[c]) ** 2).sum(axis=1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(num_clusters):
            members = labels == c
            if members.any():
                centers[c] = xy[members].mean(axis=0)
    return Partition(num_clusters=num_clusters, idx=labels)


def _nearest_bs(network: Network) -> np.ndarray:
    """Index of the closest base station for every user; ties go to the
    lowest BS id (squared distances keep symmetric ties exact)."""
    bs = network.bs_positions
    users = network.user_positions
    d2 = (users[:, None, 0] - bs[None, :, 0]) ** 2 + (users[:, None, 1] - bs[None, :, 1]) ** 2
    return d2.argmin(axis=1)


def cellular_partition(network: Network) -> Partition:
    """One cluster per base station; every user joins its nearest one."""
    m = network.num_bs
    if m < 1:
        raise ValueError("cellular partition needs at least one base station")
    labels = np.empty(network.num_nodes, dtype=np.int64)
    labels[:m] = np.arange(m)
    labels[m:] = _nearest_bs(network)
    return Partition(num_clusters=m, idx=labels)


def bs_clustering_partition(network: Network, num_clusters: int, seed: int) -> Partition:
    """k-means++ over base stations only; users follow their nearest one."""
    m = network.num_bs
    if num_clusters > m:
        raise ValueError(f"cannot split {m} base stations into {num_clusters} clusters")
    bs_part = kmeans_pp(network.bs_positions, num_clusters, seed)
    labels = np.empty(network.num_nodes, dtype=np.int64)
    labels[:m] = bs_part.idx
    labels[m:] = bs_part.idx[_nearest_bs(network)]
    return Partition(num_clusters=num_clusters, idx=labels)


def initial_partition(network: Network, num_clusters: int, seed: int) -> Partition:
    """Default refinement start: k-means++ over all node positions jointly."""
    return kmeans_pp(network.positions, num_clusters, seed)


def cgn_refine(
    network: Network,
    initial: Partition,
    batch: FadingBatch,
    config: RefinementConfig,
) -> tuple[Partition, RefinementTrace]:
    """Iteratively equalize cluster capacities by single-node moves.

    Per iteration, while the spread exceeds ``config.delta``:

    1. grow: among nodes outside the minimum-capacity cluster, the one with
       the smallest distance to any of its members moves in;
    2. shrink: the member of the maximum-capacity cluster farthest from that
       cluster's centroid moves to whichever other cluster is closest to it.

    Either move is skipped when it would shrink the donor below
    ``config.min_cluster_size``; capacities of the touched clusters are then
    recomputed on the shared batch. If both moves are skipped the state can
    never change again and the loop stops early. On hitting
    ``config.max_iterations`` the best partition seen is returned instead of
    the final one.
    """
    validate_partition(network, initial)
    num_clusters = initial.num_clusters
    if num_clusters < 2:
        raise ValueError("refinement needs at least two clusters")
    sizes = initial.cluster_sizes()
    if (sizes == 0).any():
        raise ValueError("refinement requires every initial cluster to be nonempty")

    evaluator = CapacityEvaluator(network, batch)
    pos = network.positions
    m = network.num_bs
    n = network.num_nodes
    node_ids = np.arange(n)
    labels = initial.idx.copy()
    sizes = sizes.copy()

    def cluster_capacity(cid: int) -> float:
        ids = node_ids[labels == cid]
        return evaluator.mean_capacity(ids[ids < m], ids[ids >= m])

    cap = np.array([cluster_capacity(c) for c in range(num_clusters)])

    def snapshot(iteration: int, moved: tuple[int, ...]) -> IterationRecord:
        c_min = float(cap.min())
        c_max = float(cap.max())
        return IterationRecord(iteration=iteration, c_min=c_min, c_max=c_max,
                               spread=c_max - c_min, moved=moved)

    init_record = snapshot(0, ())
    steps: list[IterationRecord] = []
    best_key = (init_record.c_min, -init_record.spread)
    best_labels = labels.copy()
    best_iteration = 0

    iteration = 0
    spread = init_record.spread
    while spread > config.delta and iteration < config.max_iterations:
        iteration += 1
        l_min = int(cap.argmin())
        l_max = int(cap.argmax())
        moved: list[int] = []
        touched: set[int] = set()

        # grow: nearest outsider joins the weakest cluster
        members = node_ids[labels == l_min]
        outsiders = node_ids[labels != l_min]
        d2 = ((pos[outsiders][:, None, :] - pos[members][None, :, :]) ** 2).sum(axis=2).min(axis=1)
        p_node = int(outsiders[d2.argmin()])
        donor = int(labels[p_node])
        if sizes[donor] - 1 >= config.min_cluster_size:
            labels[p_node] = l_min
            sizes[donor] -= 1
            sizes[l_min] += 1
            moved.append(p_node)
            touched.update((donor, l_min))

        # shrink: the strongest cluster sheds its most peripheral member
        members = node_ids[labels == l_max]
        if members.size and sizes[l_max] - 1 >= config.min_cluster_size:
            centroid = pos[members].mean(axis=0)
            q_node = int(members[(((pos[members] - centroid) ** 2).sum(axis=1)).argmax()])
            dq = ((pos - pos[q_node]) ** 2).sum(axis=1)
            nearest = np.full(num_clusters, np.inf)
            np.minimum.at(nearest, labels, dq)
            nearest[l_max] = np.inf
            target = int(nearest.argmin())
            labels[q_node] = target
            sizes[l_max] -= 1
            sizes[target] += 1
            moved.append(q_node)
            touched.update((l_max, target))

        if not touched:
            # both moves blocked by the size guard; nothing can change anymore
            break

        for cid in sorted(touched):
            cap[cid] = cluster_capacity(cid)
        record = snapshot(iteration, tuple(moved))
        steps.append(record)
        spread = record.spread
        key = (record.c_min, -record.spread)
        if key > best_key:
            best_key = key
            best_labels = labels.copy()
            best_iteration = iteration

    converged = spread <= config.delta
    final_labels = labels if converged else best_labels
    trace = RefinementTrace(initial=init_record, steps=tuple(steps),
                            converged=converged, best_iteration=best_iteration)
    return Partition(num_clusters=num_clusters, idx=final_labels), trace


def cgn_partition(
    network: Network,
    num_clusters: int,
    batch: FadingBatch,
    config: RefinementConfig,
) -> tuple[Partition, RefinementTrace]:
    """Refinement from its default start (k-means++ over all nodes)."""
    return cgn_refine(network, initial_partition(network, num_clusters, config.seed), batch, config)


def enumerate_partitions(num_items: int, num_clusters: int) -> Iterator[np.ndarray]:
    """All partitions of ``num_items`` items into exactly ``num_clusters``
    nonempty clusters, one canonical labeling each (labels appear in first-use
    order, which drops permutations of cluster ids)."""
    if num_items < 1:
        raise ValueError("need at least one item")
    if num_clusters < 1 or num_clusters > num_items:
        return
    labels = np.zeros(num_items, dtype=np.int64)

    def rec(i: int, max_used: int) -> Iterator[np.ndarray]:
        if i == num_items:
            if max_used + 1 == num_clusters:
                yield labels.copy()
            return
        remaining = num_items - i - 1
        for c in range(min(max_used + 1, num_clusters - 1) + 1):
            new_max = max(max_used, c)
            # prune branches that can no longer reach num_clusters labels
            if num_clusters - (new_max + 1) <= remaining:
                labels[i] = c
                yield from rec(i + 1, new_max)

    yield from rec(1, 0)


def exhaustive_maxmin(
    network: Network,
    num_clusters: int,
    batch: FadingBatch,
    max_assignments: int = 1_000_000,
) -> tuple[Partition, float]:
    """Exact max-min decomposition by enumeration; the toy-scale oracle.

    Refuses instances where ``num_clusters ** num_nodes`` exceeds
    ``max_assignments``. Evaluates the minimum cluster capacity of every
    canonical partition on the shared batch and returns an argmax.
    """
    n = network.num_nodes
    if num_clusters**n > max_assignments:
        raise ValueError(
            f"instance too large to enumerate: {num_clusters}**{n} assignments "
            f"exceeds the cap of {max_assignments}"
        )
    if num_clusters > n:
        raise ValueError(f"cannot split {n} nodes into {num_clusters} clusters")
    evaluator = CapacityEvaluator(network, batch)
    m = network.num_bs
    best_labels = None
    best_c_min = -np.inf
    for labels in enumerate_partitions(n, num_clusters):
        c_min = np.inf
        for cid in range(num_clusters):
            ids = np.flatnonzero(labels == cid)
            c = evaluator.mean_capacity(ids[ids < m], ids[ids >= m])
            if c < c_min:
                c_min = c
        if c_min > best_c_min:
            best_c_min = c_min
            best_labels = labels
    assert best_labels is not None
    return Partition(num_clusters=num_clusters, idx=best_labels), float(best_c_min)
