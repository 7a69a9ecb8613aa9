"""Closed-form optima for small and symmetric networks, used to certify the solvers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BadNormalizationError, InvalidInputError
from .network import AgentSet, WeightedNetwork
from .numerics import spectral_radius_sigma_g


@dataclass(frozen=True)
class ThreeAgentSpec:
    """Triangle with G_12 = 1 >= G_13 = g13 >= G_23 = g23 > 0."""

    g13: float
    g23: float

    def __post_init__(self):
        if not (1.0 >= self.g13 >= self.g23 > 0.0):
            raise BadNormalizationError(f"need 1 >= g13 >= g23 > 0, got g13={self.g13}, g23={self.g23}")

    def network(self) -> WeightedNetwork:
        return three_agent_network(self.g13, self.g23)


class ClosedFormContract(NamedTuple):
    active_set: AgentSet
    shares: np.ndarray
    c: float


class SpectralCertificate(NamedTuple):
    rho_star: float
    max_rival_rho: float
    margin: float


class OracleAllocation(NamedTuple):
    shares: np.ndarray
    c: float
    witnesses: dict


def three_agent_network(g13: float, g23: float) -> WeightedNetwork:
    return WeightedNetwork(np.array([[0.0, 1.0, g13], [1.0, 0.0, g23], [g13, g23, 0.0]]))


def three_agent_contract(spec: ThreeAgentSpec, s: float = 1.0) -> ClosedFormContract:
    """Optimal shares on the normalised triangle.

    All three agents are active iff g13 + g23 > 1; otherwise the strongest
    pair splits s evenly.
    """
    if not 0 < s <= 1:
        raise InvalidInputError(f"total share must lie in (0, 1], got {s}")
    g13, g23 = spec.g13, spec.g23
    if g13 + g23 <= 1.0:
        return ClosedFormContract((0, 1), np.array([s / 2, s / 2, 0.0]), s / 2)
    c = 2.0 * g13 * g23 * s / (2.0 * (g13 + g23) - 1.0 - (g13 - g23) ** 2)
    x = np.array([
        (1.0 + g13 - g23) / (2.0 * g13),
        (1.0 + g23 - g13) / (2.0 * g23),
        (g13 + g23 - 1.0) / (2.0 * g13 * g23),
    ])
    return ClosedFormContract((0, 1, 2), c * x, c)


def g_star(g13: float) -> float:
    """G_23 at which d(sigma_1/sigma_2)/dG_23 changes sign."""
    if not 0.5 < g13 < 1.0:
        raise InvalidInputError(f"g13 must lie in (1/2, 1), got {g13}")
    r = math.sqrt(1.0 - g13)
    return r * (math.sqrt(2.0) - r)


def simplex_samples(rng: np.random.Generator, trials: int, n: int) -> np.ndarray:
    """Uniform points on the unit simplex from normalised exponential spacings."""
    e = rng.standard_exponential((trials, n))
    return e / e.sum(axis=1, keepdims=True)


def spectral_radius_certificate(net: WeightedNetwork, contract, trials: int = 10_000, seed: int = 0,
                                chunk: int = 4096) -> SpectralCertificate:
    """Compare rho(Sigma* G) with rho(Sigma G) for random feasible shares.

    Rivals use the similar symmetric matrix Sigma^1/2 G Sigma^1/2, whose
    largest eigenvalue is the Perron root.
    """
    g = net.weights
    shares = contract.shares if hasattr(contract, "shares") else np.asarray(contract, dtype=float)
    rho_star = spectral_radius_sigma_g(shares, g)
    rng = np.random.default_rng(seed)
    best = -np.inf
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        root = np.sqrt(simplex_samples(rng, m, net.n))
        sym = root[:, :, None] * g[None] * root[:, None, :]
        best = max(best, float(np.max(np.linalg.eigvalsh(sym)[:, -1])))
        done += m
    return SpectralCertificate(rho_star, best, rho_star - best)


def oracle_network(case: str, n: int) -> WeightedNetwork:
    """Complete graph, antipodal-free circulant, or star with agent 0 at the centre."""
    _check_case(case, n)
    if case == "clique":
        g = np.ones((n, n)) - np.eye(n)
    elif case == "circulant_ex2":
        i = np.arange(n)
        gap = np.abs(i[:, None] - i[None, :])
        g = ((gap != 0) & (gap != n // 2)).astype(float)
    else:
        g = np.zeros((n, n))
        g[0, 1:] = g[1:, 0] = 1.0
    return WeightedNetwork(g)


def _check_case(case: str, n: int) -> None:
    if case not in ("clique", "circulant_ex2", "star"):
        raise InvalidInputError(f"unknown case {case!r}")
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidInputError(f"n must be an integer >= 2, got {n!r}")
    if case == "circulant_ex2" and (n % 2 or n < 4):
        raise InvalidInputError(f"circulant case needs an even n >= 4, got {n}")
    if case == "star" and n < 3:
        raise InvalidInputError(f"a star needs n >= 3, got {n}")


def clique_circle_star_oracle(case: str, n: int, s: float = 1.0) -> OracleAllocation:
    """Optimal c and witness allocations for three symmetric families."""
    _check_case(case, n)
    if not 0 < s <= 1:
        raise InvalidInputError(f"total share must lie in (0, 1], got {s}")
    if case == "clique":
        shares = np.full(n, s / n)
        return OracleAllocation(shares, s * (n - 1) / n, {"clique": shares})
    if case == "circulant_ex2":
        full = np.full(n, s / n)
        half = np.zeros(n)
        half[: n // 2] = 2.0 * s / n
        return OracleAllocation(full, s * (n - 2) / n, {"full": full, "clique": half})
    shares = np.full(n, s / (2.0 * (n - 1)))
    shares[0] = s / 2
    edge = np.zeros(n)
    edge[:2] = s / 2
    return OracleAllocation(shares, s / 2, {"star": shares, "edge": edge})
