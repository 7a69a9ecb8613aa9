"""Weighted undirected complementarity networks and their combinatorics."""
from __future__ import annotations

import json
import math
import warnings
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySetError, InvalidInputError, NotUnweightedError

# Weights below this count as absent links for connectivity questions.
ZERO_WEIGHT = 1e-12

AgentSet = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class WeightedNetwork:
    """Symmetric nonnegative weight matrix with zero diagonal.

    Asymmetric input is replaced by ``(G + G.T) / 2`` (team performance only
    sees the symmetric part) with a warning.
    """

    weights: np.ndarray

    def __post_init__(self):
        g = np.array(self.weights, dtype=float, copy=True)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise InvalidInputError(f"weights must be a nonempty square matrix, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InvalidInputError("weights must be finite")
        if np.any(g < 0):
            raise InvalidInputError("weights must be nonnegative")
        if np.any(np.diag(g) != 0):
            raise InvalidInputError("self-links are not allowed (diagonal must be zero)")
        if not np.array_equal(g, g.T):
            warnings.warn("asymmetric weight matrix symmetrized as (G + G^T)/2", stacklevel=3)
            g = 0.5 * (g + g.T)
        if not np.any(g > 0):
            raise InvalidInputError("network has no links")
        g.setflags(write=False)
        object.__setattr__(self, "weights", g)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self.weights > ZERO_WEIGHT

    def neighbors(self, i: int) -> AgentSet:
        return tuple(int(j) for j in np.flatnonzero(self.adjacency[i]))

    def with_weight(self, i: int, j: int, w: float) -> "WeightedNetwork":
        g = self.weights.copy()
        g[i, j] = g[j, i] = w
        return WeightedNetwork(g)

    def __eq__(self, other):
        return isinstance(other, WeightedNetwork) and np.array_equal(self.weights, other.weights)

    __hash__ = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[float]]) -> "WeightedNetwork":
        g = np.zeros((n, n))
        seen = set()
        for edge in edges:
            if len(edge) != 3:
                raise InvalidInputError(f"edge must be [i, j, w], got {edge!r}")
            i, j, w = edge
            if int(i) != i or int(j) != j:
                raise InvalidInputError(f"edge endpoints must be integers, got {edge!r}")
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInputError(f"edge {edge!r} out of range for n={n}")
            if i == j:
                raise InvalidInputError(f"self-link {edge!r}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidInputError(f"duplicate edge {key}")
            seen.add(key)
            g[i, j] = g[j, i] = float(w)
        return cls(g)


def load_network(source) -> WeightedNetwork:
    """Read ``{"n", "edges": [[i, j, w], ...]}`` or ``{"n", "matrix": [...]}``.

    ``source`` is a path or an already-parsed dict. The matrix may be flat
    row-major or nested rows.
    """
    if isinstance(source, dict):
        data = source
    else:
        with open(Path(source)) as fh:
            data = json.load(fh)
    if not isinstance(data, dict) or "n" not in data:
        raise InvalidInputError("network JSON needs an integer 'n'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise InvalidInputError(f"'n' must be a positive integer, got {n!r}")
    if ("edges" in data) == ("matrix" in data):
        raise InvalidInputError("network JSON needs exactly one of 'edges' or 'matrix'")
    if "edges" in data:
        return WeightedNetwork.from_edges(n, data["edges"])
    try:
        m = np.asarray(data["matrix"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad matrix: {exc}") from exc
    if m.size != n * n:
        raise InvalidInputError(f"matrix has {m.size} entries, expected {n * n}")
    return WeightedNetwork(m.reshape(n, n))


def network_to_json(net: WeightedNetwork) -> dict:
    edges = [
        [i, j, float(net.weights[i, j])]
        for i in range(net.n)
        for j in range(i + 1, net.n)
        if net.weights[i, j] != 0
    ]
    return {"n": net.n, "edges": edges}


def agent_set(members: Iterable[int], n: int | None = None) -> AgentSet:
    """Validate and sort a collection of agent indices."""
    out = tuple(sorted(int(m) for m in members))
    if not out:
        raise EmptySetError("agent set is empty")
    if len(set(out)) != len(out):
        raise InvalidInputError(f"duplicate agents in {out}")
    if out[0] < 0 or (n is not None and out[-1] >= n):
        raise InvalidInputError(f"agent indices {out} out of range for n={n}")
    return out


def restrict(net: WeightedNetwork, members: Iterable[int]) -> np.ndarray:
    """Principal submatrix of the weights on ``members`` (induced order).

    Returns a bare array: a subnetwork may legitimately have no links (e.g. a
    single agent), which :class:`WeightedNetwork` rejects.
    """
    idx = list(agent_set(members, net.n))
    return net.weights[np.ix_(idx, idx)].copy()


def diameter(net: WeightedNetwork, members: Iterable[int]) -> float:
    """Hop-count diameter of the induced subgraph; ``math.inf`` if disconnected."""
    idx = agent_set(members, net.n)
    adj = net.adjacency[np.ix_(idx, idx)]
    k = len(idx)
    worst = 0
    for src in range(k):
        dist = [-1] * k
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(adj[u]):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if min(dist) < 0:
            return math.inf
        worst = max(worst, max(dist))
    return worst


def diameter_at_most_two(adjacency: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    """Vectorised ``diameter <= 2`` test for a stack of equal-size subsets.

    ``subsets`` is an (m, k) integer array of agent indices; returns a length-m
    boolean mask. Every pair must be adjacent or share a neighbour inside the
    subset.
    """
    sub = adjacency[subsets[:, :, None], subsets[:, None, :]].astype(np.int64)
    two_hop = np.matmul(sub, sub) > 0
    k = subsets.shape[1]
    reach = (sub > 0) | two_hop | np.eye(k, dtype=bool)
    return np.all(reach, axis=(1, 2))


def is_unweighted(net: WeightedNetwork) -> bool:
    g = net.weights
    return bool(np.all((g == 0) | (g == 1)))


def _neighbor_masks(adj: np.ndarray) -> list[int]:
    return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in adj]


def _color_order(cand: int, nbr: list[int]) -> list[tuple[int, int]]:
    """Greedy colouring of the candidate set; returns (vertex, colour) by colour."""
    out = []
    color = 0
    remaining = cand
    while remaining:
        color += 1
        avail = remaining
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~nbr[v] & ~low
            remaining &= ~low
            out.append((v, color))
    return out


def _clique_number_at_least(nbr: list[int], cand: int, need: int) -> bool:
    """True iff the vertices in bitmask ``cand`` contain a clique of size ``need``."""
    if need <= 0:
        return True
    if bin(cand).count("1") < need:
        return False
    def expand(size: int, p: int) -> bool:
        for v, col in reversed(_color_order(p, nbr)):
            if size + col < need:
                return False
            if size + 1 >= need:
                return True
            newp = p & nbr[v]
            if newp and expand(size + 1, newp):
                return True
            p &= ~(1 << v)
        return False

    return expand(0, cand)


def clique_number(net: WeightedNetwork) -> int:
    """Size of a maximum clique (exact branch and bound, colouring bound)."""
    nbr = _neighbor_masks(net.adjacency)
    everyone = (1 << net.n) - 1
    k = 1
    while _clique_number_at_least(nbr, everyone, k + 1):
        k += 1
    return k


def max_clique(net: WeightedNetwork) -> AgentSet:
    """Lexicographically smallest maximum clique of an unweighted network."""
    if not is_unweighted(net):
        raise NotUnweightedError("max_clique requires 0/1 weights")
    nbr = _neighbor_masks(net.adjacency)
    size = clique_number(net)
    chosen: list[int] = []
    common = (1 << net.n) - 1
    for v in range(net.n):
        if len(chosen) == size:
            break
        if not (common >> v) & 1:
            continue
        # vertices after v that are adjacent to every chosen vertex and to v
        later = common & nbr[v] & ~((1 << (v + 1)) - 1)
        if _clique_number_at_least(nbr, later, size - len(chosen) - 1):
            chosen.append(v)
            common &= nbr[v]
    return tuple(chosen)


def is_clique(net: WeightedNetwork, members: Iterable[int]) -> bool:
    idx = list(members)
    adj = net.adjacency
    return all(adj[i, j] for a, i in enumerate(idx) for j in idx[a + 1:])
