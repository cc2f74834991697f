import numpy as np
import pytest

from udncluster import Network, PhysicalParams, PlacementSpec, generate_network


@pytest.fixture
def params():
    return PhysicalParams()


@pytest.fixture
def tiny_network(params):
    """One BS at the origin area, one user nearby."""
    return Network.from_positions(np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]]), params)


@pytest.fixture
def small_ud_network(params):
    """A seeded uniform network small enough for exhaustive-ish checks."""
    spec = PlacementSpec(seed=11, side_length=40.0, explicit_counts=(12, 6))
    return generate_network(spec, params)
