import numpy as np
import pytest

from equitynet.analytic_oracles import oracle_network, three_agent_network
from equitynet.network import WeightedNetwork
from equitynet.success_model import CappedLinear, Saturating


@pytest.fixture
def pair():
    return WeightedNetwork(np.array([[0.0, 1.0], [1.0, 0.0]]))


@pytest.fixture
def triangle():
    """G12 = 1, G13 = 0.8, G23 = 0.6."""
    return three_agent_network(0.8, 0.6)


@pytest.fixture
def k3():
    return oracle_network("clique", 3)


@pytest.fixture
def linear_half():
    return CappedLinear(beta=0.5, alpha=0.5)


@pytest.fixture
def saturating():
    return Saturating(beta=0.4, kappa=0.9, lam=1.3)
