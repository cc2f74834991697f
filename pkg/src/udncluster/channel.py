"""Link gains: threshold power-law path loss and seeded Rayleigh fading.

The per-link gain is h = beta * gamma. The large-scale part beta depends only
on the BS-user distance and saturates below the distance threshold; the
small-scale part gamma is unit-variance complex Gaussian, drawn from a
counter-based generator keyed by (batch seed, bs id), so gamma for a given
(sample, bs, user) is a pure function of those coordinates. Cluster and sample
evaluation order therefore never changes the draws, which keeps capacity
comparisons between candidate partitions on common random numbers.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox

from .model import ClusterView, Network, PhysicalParams

_SQRT_HALF = np.sqrt(0.5)


def large_scale_fading(d, params: PhysicalParams):
    """Amplitude gain beta(d): d**(-alpha/2) beyond the threshold distance,
    held at threshold**(-alpha/2) at or below it. Accepts scalars or arrays."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("distances must be nonnegative")
    exponent = -params.path_loss_alpha / 2.0
    # clamp before exponentiating so d=0 never reaches the power law
    clamped = np.maximum(d, params.distance_threshold)
    out = clamped**exponent
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LinkGains:
    """Geometry-only gains for every (bs, user) pair of a network."""

    distance: np.ndarray       # (M, K) meters
    beta: np.ndarray           # (M, K) amplitude gain
    beta_sq: np.ndarray        # (M, K) power gain
    beta_sq_total: np.ndarray  # (M,) sum of beta_sq over all users


_gain_cache: "weakref.WeakKeyDictionary[Network, LinkGains]" = weakref.WeakKeyDictionary()


def link_gains(network: Network) -> LinkGains:
    """Pairwise distances and large-scale gains, memoized per network."""
    cached = _gain_cache.get(network)
    if cached is not None:
        return cached
    bs = network.bs_positions
    users = network.user_positions
    d = np.hypot(bs[:, None, 0] - users[None, :, 0], bs[:, None, 1] - users[None, :, 1])
    beta = np.asarray(large_scale_fading(d, network.params))
    beta = beta.reshape(d.shape)
    beta_sq = beta * beta
    gains = LinkGains(distance=d, beta=beta, beta_sq=beta_sq, beta_sq_total=beta_sq.sum(axis=1))
    for arr in (gains.distance, gains.beta, gains.beta_sq, gains.beta_sq_total):
        arr.setflags(write=False)
    _gain_cache[network] = gains
    return gains


@dataclass
class FadingBatch:
    """A seeded set of small-scale fading realizations.

    ``gamma_rows(bs_id)`` returns the (num_samples, K) complex gains of one
    base station against every user, generated from a Philox stream whose
    counter encodes the bs id. Rows are memoized up to ``cache_limit_bytes``;
    past the limit they are regenerated on demand, which changes nothing
    observable because generation is a pure function of (seed, bs id).
    """

    num_samples: int
    seed: int
    cache_limit_bytes: int = 384 * 1024 * 1024
    _num_users: int | None = field(default=None, repr=False)
    _rows: dict = field(default_factory=dict, repr=False)
    _cached_bytes: int = field(default=0, repr=False)

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("a fading batch needs at least one sample")
        self.seed = int(self.seed) & 0xFFFFFFFFFFFFFFFF

    def _bind_num_users(self, num_users: int) -> None:
        if self._num_users is None:
            self._num_users = int(num_users)
        elif self._num_users != num_users:
            raise ValueError(
                f"fading batch already bound to {self._num_users} users, got {num_users}; "
                "use one batch per network"
            )

    def _generate_row(self, bs_id: int) -> np.ndarray:
        rng = Generator(Philox(key=self.seed, counter=[0, 0, 0, int(bs_id)]))
        z = rng.standard_normal((self.num_samples, self._num_users, 2))
        row = (z[..., 0] + 1j * z[..., 1]) * _SQRT_HALF
        row.setflags(write=False)
        return row

    def gamma_rows(self, bs_id: int, num_users: int) -> np.ndarray:
        """(num_samples, num_users) complex gains for one base station."""
        self._bind_num_users(num_users)
        row = self._rows.get(bs_id)
        if row is None:
            row = self._generate_row(bs_id)
            if self._cached_bytes + row.nbytes <= self.cache_limit_bytes:
                self._rows[bs_id] = row
                self._cached_bytes += row.nbytes
        return row

    def gamma_block(self, bs_ids: np.ndarray, user_cols: np.ndarray, num_users: int) -> np.ndarray:
        """(num_samples, len(bs_ids), len(user_cols)) complex gains."""
        bs_ids = np.asarray(bs_ids, dtype=np.int64)
        user_cols = np.asarray(user_cols, dtype=np.int64)
        out = np.empty((self.num_samples, bs_ids.size, user_cols.size), dtype=complex)
        for i, m in enumerate(bs_ids):
            out[:, i, :] = self.gamma_rows(int(m), num_users)[:, user_cols]
        return out


@dataclass(frozen=True)
class ChannelMatrices:
    """Sampled channel of one cluster: gains to its own users and to everyone
    else's, for a single fading realization."""

    in_cluster: np.ndarray      # (M_l, K_l)
    out_of_cluster: np.ndarray  # (M_l, K - K_l), columns by ascending user id


def outside_user_ids(network: Network, view: ClusterView) -> np.ndarray:
    all_users = np.arange(network.num_bs, network.num_nodes)
    return np.setdiff1d(all_users, view.user_ids, assume_unique=True)


def sample_channel(network: Network, view: ClusterView, batch: FadingBatch, sample_index: int) -> ChannelMatrices:
    """Assemble the in-cluster and interference gain matrices for one sample."""
    if not (0 <= sample_index < batch.num_samples):
        raise ValueError(f"sample_index {sample_index} out of range [0, {batch.num_samples})")
    m = network.num_bs
    if view.bs_ids.size and view.bs_ids.max() >= m:
        raise ValueError("cluster view references base station ids outside the network")
    if view.user_ids.size and (view.user_ids.min() < m or view.user_ids.max() >= network.num_nodes):
        raise ValueError("cluster view references user ids outside the network")
    gains = link_gains(network)
    k = network.num_users
    in_cols = view.user_ids - m
    out_cols = outside_user_ids(network, view) - m
    gamma_in = batch.gamma_block(view.bs_ids, in_cols, k)[sample_index]
    gamma_out = batch.gamma_block(view.bs_ids, out_cols, k)[sample_index]
    h = gains.beta[np.ix_(view.bs_ids, in_cols)] * gamma_in
    pi = gains.beta[np.ix_(view.bs_ids, out_cols)] * gamma_out
    return ChannelMatrices(in_cluster=h, out_of_cluster=pi)


__all__ = [
    "ChannelMatrices",
    "FadingBatch",
    "LinkGains",
    "large_scale_fading",
    "link_gains",
    "outside_user_ids",
    "sample_channel",
]
