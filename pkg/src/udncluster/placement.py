"""Seeded node placement over a square region.

Two density-driven layouts are supported: uniform ("ud") and a centered
truncated Gaussian ("gd") that mimics a city core, denser in the middle.
A third mode, "gd_direct", draws raw complex-normal coordinates (each
component N(0, 1/2)) around the origin with no truncation; it exists for
small visualization networks and ignores the side length for sampling.

All randomness is derived from one 64-bit seed through :func:`substream_seed`,
so runs are reproducible regardless of evaluation order.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .model import Network, PhysicalParams

UNIFORM = "uniform"
GAUSSIAN = "gaussian"
GAUSSIAN_DIRECT = "gaussian_direct"

_DISTRIBUTIONS = (UNIFORM, GAUSSIAN, GAUSSIAN_DIRECT)


def _label_entropy(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def substream_seed(seed: int, label: str, index: int = 0) -> int:
    """Derive a child seed for the stream named ``label`` + ``index``.

    The split is a pure function of (seed, label, index): the label is hashed
    with SHA-256 and the triple feeds a ``numpy.random.SeedSequence``.
    """
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, _label_entropy(label), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def substream_rng(seed: int, label: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(substream_seed(seed, label, index))


@dataclass(frozen=True)
class PlacementSpec:
    """How to lay out one network.

    Node counts default to density * side_length**2 (rounded, at least 1);
    ``explicit_counts=(K, M)`` overrides them. ``gaussian_sigma`` defaults to
    side_length / 6 so the truncated Gaussian stays mostly inside the square.
    """

    distribution: str = UNIFORM
    side_length: float = 100.0
    user_density: float = 0.04
    bs_density: float = 0.02
    explicit_counts: tuple[int, int] | None = None
    gaussian_sigma: float | None = None
    seed: int = 0
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.distribution not in _DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}, expected one of {_DISTRIBUTIONS}")
        if not (math.isfinite(self.side_length) and self.side_length > 0):
            raise ValueError("side_length must be positive")
        if self.user_density < 0 or self.bs_density < 0:
            raise ValueError("densities must be nonnegative")
        if self.explicit_counts is not None:
            object.__setattr__(self, "explicit_counts", (int(self.explicit_counts[0]), int(self.explicit_counts[1])))

    def node_counts(self) -> tuple[int, int]:
        """(num_users K, num_bs M) for this spec."""
        if self.explicit_counts is not None:
            return self.explicit_counts
        area = self.side_length**2
        k = max(1, round(self.user_density * area))
        m = max(1, round(self.bs_density * area))
        return k, m

    def sigma(self) -> float:
        return self.gaussian_sigma if self.gaussian_sigma is not None else self.side_length / 6.0


def _draw_uniform(rng: np.random.Generator, n: int, a: float) -> np.ndarray:
    return rng.uniform(0.0, a, size=(n, 2))

def _draw_gaussian_truncated(rng: np.random.Generator, n: int, a: float, sigma: float) -> np.ndarray:
    # Rejection keeps the density interpretation: every node ends up in [0, a]^2.
    out = np.empty((n, 2))
    pending = np.arange(n)
    while pending.size:
        draw = rng.normal(a / 2.0, sigma, size=(pending.size, 2))
        ok = ((draw >= 0.0) & (draw <= a)).all(axis=1)
        out[pending[ok]] = draw[ok]
        pending = pending[~ok]
    return out

def _draw_gaussian_direct(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(0.0, 1.0 / math.sqrt(2.0), size=(n, 2))


def generate_network(spec: PlacementSpec, params: PhysicalParams) -> Network:
    """Place M base stations and K users i.i.d. according to the spec.

    Base stations and users draw from separate named substreams of
    ``spec.seed``, so changing one count never perturbs the other population.
    """
    k, m = spec.node_counts()
    if (k == 0 or m == 0) and not spec.allow_degenerate:
        raise ValueError("a capacity experiment needs at least one user and one base station "
                         "(set allow_degenerate=True for unit-test networks)")

    def draw(label: str, n: int) -> np.ndarray:
        rng = substream_rng(spec.seed, label)
        if spec.distribution == UNIFORM:
            return _draw_uniform(rng, n, spec.side_length)
        if spec.distribution == GAUSSIAN:
            return _draw_gaussian_truncated(rng, n, spec.side_length, spec.sigma())
        return _draw_gaussian_direct(rng, n)

    bs_xy = draw("placement/bs", m)
    user_xy = draw("placement/user", k)
    return Network.from_positions(bs_xy, user_xy, params)
