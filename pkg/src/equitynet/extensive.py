"""Choosing the active set: maximise the balanced-equity constant c per unit share."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .equilibrium import ACTIVE_EPS
from .errors import InvalidInputError, NotUnweightedError, TooLargeForEnumerationError
from .intensive import SINGULAR, IntensiveSolution, allocate_on_set, centrality_batch
from .network import AgentSet, WeightedNetwork, diameter_at_most_two, is_unweighted, max_clique

TIE_RTOL = 1e-9
MAX_N_ENUM = 16


@dataclass(frozen=True, eq=False)
class ActiveSetCandidate:
    members: AgentSet
    c_per_unit: float
    solution: IntensiveSolution  # at s = 1


@dataclass(frozen=True, eq=False)
class SearchReport:
    best: ActiveSetCandidate
    ties: list[ActiveSetCandidate] = field(default_factory=list)
    evaluated: int = 0
    pruned_by_diameter: int = 0
    method: str = "enumeration"


def _enumerate(net: WeightedNetwork, prune_diameter: bool, min_size: int) -> SearchReport:
    """Score every subset in (cardinality, lexicographic) order, batched per size."""
    n = net.n
    g = net.weights
    adj = net.adjacency
    found: list[tuple[AgentSet, float]] = []
    evaluated = pruned = 0
    for k in range(min_size, n + 1):
        subsets = np.array(list(combinations(range(n), k)), dtype=np.intp).reshape(-1, k)
        if prune_diameter and k > 1:
            keep = diameter_at_most_two(adj, subsets)
            pruned += int(np.count_nonzero(~keep))
            subsets = subsets[keep]
        if subsets.shape[0] == 0:
            continue
        evaluated += subsets.shape[0]
        x, status = centrality_batch(g[subsets[:, :, None], subsets[:, None, :]])
        ok = (status != SINGULAR) & np.all(x > ACTIVE_EPS, axis=1)
        c = 1.0 / x[ok].sum(axis=1)
        found.extend((tuple(int(v) for v in row), float(cv)) for row, cv in zip(subsets[ok], c))
    if not found:
        raise InvalidInputError("no subset admits a balanced positive allocation")
    c_max = max(cv for _, cv in found)
    ties = [
        ActiveSetCandidate(members, cv, allocate_on_set(net, members, 1.0, allow_singular=True))
        for members, cv in found
        if cv >= c_max * (1.0 - TIE_RTOL)
    ]
    return SearchReport(ties[0], ties, evaluated, pruned, "enumeration")


def search_active_set(
    net: WeightedNetwork, max_n_enum: int = MAX_N_ENUM, prune_diameter: bool = True
) -> SearchReport:
    """Exhaustive search for the support maximising c at s = 1.

    Sets of diameter above two are never optimal and are pruned; singletons
    have c = 0 and are skipped. The winner is the first tie in enumeration
    order (smallest cardinality, then lexicographic).
    """
    if net.n > max_n_enum:
        raise TooLargeForEnumerationError(
            f"n={net.n} exceeds the enumeration cap {max_n_enum}; raise the cap or use the clique path"
        )
    return _enumerate(net, prune_diameter, min_size=2)


def search_active_set_unweighted(net: WeightedNetwork) -> SearchReport:
    """Equal shares on the lexicographically first maximum clique."""
    if not is_unweighted(net):
        raise NotUnweightedError("clique path requires an unweighted network")
    clique = max_clique(net)
    sol = allocate_on_set(net, clique, 1.0)
    best = ActiveSetCandidate(clique, sol.c, sol)
    return SearchReport(best, [best], evaluated=1, pruned_by_diameter=0, method="clique")


def brute_force_oracle(net: WeightedNetwork) -> SearchReport:
    """Unpruned enumeration including singletons; a reference for the pruned search."""
    if net.n > 12:
        raise TooLargeForEnumerationError("brute-force oracle is limited to n <= 12")
    return _enumerate(net, prune_diameter=False, min_size=1)
