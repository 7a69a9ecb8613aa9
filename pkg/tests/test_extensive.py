import itertools

import numpy as np
import pytest

from equitynet.analytic_oracles import oracle_network
from equitynet.errors import NotUnweightedError, TooLargeForEnumerationError
from equitynet.extensive import brute_force_oracle, search_active_set, search_active_set_unweighted
from equitynet.intensive import balanced_performance
from equitynet.network import clique_number, diameter
from equitynet.success_model import Saturating
from equitynet.verify import random_unweighted, random_weighted


def test_triangle(triangle):
    for report in (search_active_set(triangle), brute_force_oracle(triangle)):
        assert report.best.members == (0, 1, 2)
        assert report.best.c_per_unit == pytest.approx(0.545455, abs=1e-6)


def test_weak_triangle_drops_third_agent():
    from equitynet.analytic_oracles import three_agent_network

    report = search_active_set(three_agent_network(0.4, 0.3))
    assert report.best.members == (0, 1) and report.best.c_per_unit == pytest.approx(0.5)


def test_circulant_ties():
    report = search_active_set(oracle_network("circulant_ex2", 10))
    assert report.best.members == (0, 1, 2, 3, 4)
    ties = {t.members: t.c_per_unit for t in report.ties}
    assert tuple(range(10)) in ties
    for bits in itertools.product((0, 1), repeat=5):
        clique = tuple(sorted(i + 5 * b for i, b in enumerate(bits)))
        assert ties[clique] == pytest.approx(0.8, abs=1e-12)
    assert all(abs(c - 0.8) <= 1e-9 for c in ties.values())


def test_unweighted_fast_path():
    star = oracle_network("star", 5)
    rep = search_active_set_unweighted(star)
    assert rep.method == "clique" and rep.best.members == (0, 1) and rep.best.c_per_unit == pytest.approx(0.5)
    rep = search_active_set_unweighted(oracle_network("clique", 5))
    assert rep.best.members == tuple(range(5)) and rep.best.c_per_unit == pytest.approx(0.8)
    assert np.allclose(rep.best.solution.shares, 0.2)
    rep = search_active_set_unweighted(oracle_network("circulant_ex2", 10))
    assert len(rep.best.members) == 5 and rep.best.c_per_unit == pytest.approx(0.8)


def test_star_ties_found_by_enumeration():
    rep = search_active_set(oracle_network("star", 5))
    assert rep.best.members == (0, 1)
    assert (0, 1, 2, 3, 4) in [t.members for t in rep.ties]


def test_errors(triangle):
    with pytest.raises(NotUnweightedError):
        search_active_set_unweighted(triangle)
    big = oracle_network("clique", 17)
    with pytest.raises(TooLargeForEnumerationError):
        search_active_set(big)
    with pytest.raises(TooLargeForEnumerationError):
        brute_force_oracle(oracle_network("clique", 13))


def test_pruning_is_sound_and_winners_are_compact():
    rng = np.random.default_rng(21)
    for _ in range(150):
        net = random_weighted(rng, int(rng.integers(2, 7)), p=float(rng.choice([0.3, 0.6, 1.0])))
        fast, slow = search_active_set(net), brute_force_oracle(net)
        assert fast.best.c_per_unit == pytest.approx(slow.best.c_per_unit, rel=1e-9)
        assert diameter(net, fast.best.members) <= 2
        assert fast.evaluated + fast.pruned_by_diameter <= 2**net.n - 1 - net.n


def test_unweighted_consistency():
    rng = np.random.default_rng(8)
    for _ in range(80):
        n = int(rng.integers(2, 11))
        net = random_unweighted(rng, n, 0.5)
        k = clique_number(net)
        assert abs(search_active_set(net).best.c_per_unit - (k - 1) / k) <= 1e-12
        assert abs(brute_force_oracle(net).best.c_per_unit - (k - 1) / k) <= 1e-12


def test_ties_give_same_performance():
    model = Saturating(beta=0.5, kappa=0.9, lam=1.0)
    rep = search_active_set(oracle_network("circulant_ex2", 10))
    ys = [balanced_performance(model, 1.0, t.solution.c) for t in rep.ties]
    assert max(ys) - min(ys) <= 1e-9 * max(ys)


def test_enumeration_order_is_deterministic(triangle):
    a = [t.members for t in search_active_set(oracle_network("star", 6)).ties]
    b = [t.members for t in search_active_set(oracle_network("star", 6)).ties]
    assert a == b
    assert a == sorted(a, key=lambda m: (len(m), m))
