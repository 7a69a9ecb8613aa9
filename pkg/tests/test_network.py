import itertools
import json
import math

import networkx as nx
import numpy as np
import pytest

from equitynet.analytic_oracles import oracle_network
from equitynet.errors import EmptySetError, InvalidInputError, NotUnweightedError
from equitynet.network import (
    WeightedNetwork,
    clique_number,
    diameter,
    diameter_at_most_two,
    is_clique,
    is_unweighted,
    load_network,
    max_clique,
    network_to_json,
    restrict,
)
from equitynet.verify import random_unweighted


def cycle(n):
    g = np.zeros((n, n))
    for i in range(n):
        g[i, (i + 1) % n] = g[(i + 1) % n, i] = 1.0
    return WeightedNetwork(g)


def path(n):
    return WeightedNetwork.from_edges(n, [[i, i + 1, 1.0] for i in range(n - 1)])


def test_restrict_examples(k3, triangle):
    assert np.array_equal(restrict(k3, [0, 1]), [[0, 1], [1, 0]])
    assert np.allclose(restrict(triangle, (0, 2)), [[0, 0.8], [0.8, 0]])
    assert np.array_equal(restrict(triangle, range(3)), triangle.weights)


def test_restrict_empty(k3):
    with pytest.raises(EmptySetError):
        restrict(k3, [])


def test_diameter_examples(k3):
    assert diameter(cycle(5), range(5)) == 2
    assert diameter(k3, range(3)) == 1
    assert diameter(path(4), range(4)) == 3
    assert diameter(k3, [1]) == 0
    assert diameter(path(4), [0, 3]) == math.inf


def test_diameter_batch_matches_bfs():
    rng = np.random.default_rng(3)
    for _ in range(30):
        net = random_unweighted(rng, 7, 0.4)
        for k in (2, 3, 4, 5):
            subs = np.array(list(itertools.combinations(range(7), k)))
            fast = diameter_at_most_two(net.adjacency, subs)
            slow = [diameter(net, s) <= 2 for s in subs]
            assert fast.tolist() == slow


def test_max_clique_examples():
    assert max_clique(oracle_network("circulant_ex2", 10)) == (0, 1, 2, 3, 4)
    assert max_clique(oracle_network("star", 5)) == (0, 1)
    assert max_clique(oracle_network("clique", 4)) == (0, 1, 2, 3)


def test_max_clique_rejects_weights(triangle):
    with pytest.raises(NotUnweightedError):
        max_clique(triangle)


def test_max_clique_against_networkx():
    rng = np.random.default_rng(11)
    for _ in range(150):
        n = int(rng.integers(2, 13))
        net = random_unweighted(rng, n, float(rng.choice([0.3, 0.5, 0.7])))
        graph = nx.from_numpy_array(net.weights)
        cliques = [tuple(sorted(c)) for c in nx.find_cliques(graph)]
        size = max(len(c) for c in cliques)
        best = max_clique(net)
        assert len(best) == size == clique_number(net)
        assert is_clique(net, best)
        # lexicographically smallest among all maximum cliques
        all_max = {tuple(sorted(s)) for c in cliques if len(c) >= size for s in itertools.combinations(c, size)}
        assert best == min(all_max)


def test_is_unweighted(k3, triangle):
    assert is_unweighted(k3)
    assert not is_unweighted(triangle)
    assert is_unweighted(WeightedNetwork.from_edges(4, [[1, 3, 1.0]]))


def test_validation():
    with pytest.raises(InvalidInputError):
        WeightedNetwork(np.zeros((3, 3)))
    with pytest.raises(InvalidInputError):
        WeightedNetwork(np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        WeightedNetwork(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        WeightedNetwork.from_edges(3, [[0, 1, 1.0], [1, 0, 0.5]])
    with pytest.raises(InvalidInputError):
        WeightedNetwork.from_edges(3, [[0, 3, 1.0]])


def test_asymmetric_input_is_symmetrized():
    with pytest.warns(UserWarning):
        net = WeightedNetwork(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.array_equal(net.weights, [[0, 0.5], [0.5, 0]])


def test_weights_are_read_only(triangle):
    with pytest.raises(ValueError):
        triangle.weights[0, 1] = 3.0


def test_json_round_trip(tmp_path, triangle):
    path_ = tmp_path / "net.json"
    path_.write_text(json.dumps(network_to_json(triangle)))
    assert load_network(path_) == triangle
    flat = {"n": 3, "matrix": triangle.weights.ravel().tolist()}
    assert load_network(flat) == triangle
    with pytest.raises(InvalidInputError):
        load_network({"n": 3, "matrix": [0.0] * 8})
    with pytest.raises(InvalidInputError):
        load_network({"n": 3})
