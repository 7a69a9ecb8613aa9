"""Nash equilibrium of the effort game for a given equity allocation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    InvalidInputError,
    NoEquilibriumLinearPError,
    SpectralInfeasibleError,
)
from .network import AgentSet, WeightedNetwork
from .numerics import bisect_decreasing, expand_upper, spectral_radius_sigma_g
from .success_model import SuccessModel

# A share above this is "positive"; the single definition of an active agent.
ACTIVE_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class EquityAllocation:
    shares: np.ndarray

    def __post_init__(self):
        s = np.array(self.shares, dtype=float, copy=True)
        if s.ndim != 1 or s.size == 0:
            raise InvalidInputError("shares must be a nonempty vector")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise InvalidInputError("shares must be finite and nonnegative")
        if s.sum() > 1.0 + 1e-12:
            raise InvalidInputError(f"shares sum to {s.sum():.12g} > 1")
        s.setflags(write=False)
        object.__setattr__(self, "shares", s)

    @property
    def n(self) -> int:
        return self.shares.size

    @property
    def total(self) -> float:
        return float(self.shares.sum())

    @property
    def active(self) -> AgentSet:
        return tuple(int(i) for i in np.flatnonzero(self.shares > ACTIVE_EPS))


@dataclass(frozen=True, eq=False)
class EquilibriumResult:
    actions: np.ndarray
    performance: float
    success_prob: float
    agent_payoffs: np.ndarray
    principal_value: float
    residual: float
    marginal: float  # P'(Y*)

    def to_json(self) -> dict:
        return {
            "actions": self.actions.tolist(),
            "performance": self.performance,
            "success_prob": self.success_prob,
            "agent_payoffs": self.agent_payoffs.tolist(),
            "principal_value": self.principal_value,
            "foc_residual": self.residual,
        }


@dataclass(frozen=True, eq=False)
class BonacichDiagnostics:
    M: np.ndarray
    b: np.ndarray
    b_bar: np.ndarray


def _weights(net) -> np.ndarray:
    return net.weights if isinstance(net, WeightedNetwork) else np.asarray(net, dtype=float)


def team_performance(net, actions, beta: float):
    """Y(a) = sum(a) + beta/2 * a' G a; rows of a 2-D ``actions`` are profiles."""
    g = _weights(net)
    a = np.asarray(actions, dtype=float)
    quad = np.einsum("...i,ij,...j->...", a, g, a)
    out = a.sum(axis=-1) + 0.5 * beta * quad
    return float(out) if out.ndim == 0 else out


def foc_residual(net, model: SuccessModel, shares, actions, performance: float) -> float:
    g = _weights(net)
    p = model.deriv(performance)
    return float(np.max(np.abs(actions - p * shares * (1.0 + model.beta * (g @ actions)))))


def _finish(net, model, shares, actions, marginal=None) -> EquilibriumResult:
    y = team_performance(net, actions, model.beta)
    prob = model.prob(y)
    p = model.deriv(y)  # raises KinkReached past a cap
    return EquilibriumResult(
        actions=actions,
        performance=y,
        success_prob=prob,
        agent_payoffs=prob * shares - 0.5 * actions**2,
        principal_value=(1.0 - shares.sum()) * prob,
        residual=foc_residual(net, model, shares, actions, y),
        marginal=p if marginal is None else marginal,
    )


def lower_bracket(model: SuccessModel, spread: float, f) -> float:
    """Smallest usable performance level for the fixed-point search.

    ``spread`` is beta times the spectral quantity that must stay below
    1 / P'(y) (rho(Sigma G) for equilibria, c for balanced allocations).
    ``f`` is the decreasing fixed-point map minus identity; the returned point
    has ``f >= 0``.
    """
    if model.deriv(0.0) * spread < 1.0:
        return 0.0

    def excess(y):
        return model.deriv(y) * spread - 1.0

    y0 = bisect_decreasing(excess, 0.0, expand_upper(excess, 1.0), rtol=1e-15)
    delta = 1e-9 * max(1.0, y0)
    for _ in range(200):
        lo = y0 + delta
        if model.deriv(lo) * spread >= 1.0:
            delta *= 2.0
            continue
        try:
            val = f(lo)
        except np.linalg.LinAlgError:
            delta *= 2.0
            continue
        if val >= 0:
            return lo
        delta *= 0.5
    raise ConvergenceError("could not bracket the fixed point from below")


def solve_equilibrium(
    net: WeightedNetwork,
    model: SuccessModel,
    alloc: EquityAllocation,
    bracket: tuple[float, float] | None = None,
) -> EquilibriumResult:
    """Unique equilibrium: a* = [I - P'(Y*) beta Sigma G]^-1 P'(Y*) sigma, Y* = Y(a*).

    Bisection on the strictly decreasing F(y) = Y(a*(y)) - y; exactly linear
    P has a constant slope, so a* follows from one linear solve. ``bracket``
    overrides the automatic bracket (it must straddle the root).
    """
    g = net.weights
    sigma = alloc.shares
    if sigma.size != net.n:
        raise InvalidInputError(f"allocation has {sigma.size} shares for {net.n} agents")
    n = net.n
    if not np.any(sigma > 0):
        return _finish(net, model, sigma, np.zeros(n))
    beta = model.beta
    sg = sigma[:, None] * g
    rho = spectral_radius_sigma_g(sigma, g)
    eye = np.eye(n)

    def actions_at(y):
        p = model.deriv(y)
        a = np.linalg.solve(eye - p * beta * sg, p * sigma)
        a[sigma == 0] = 0.0
        return a

    if model.is_linear:
        if model.alpha * beta * rho >= 1.0:
            raise NoEquilibriumLinearPError(
                f"alpha*beta*rho(Sigma G) = {model.alpha * beta * rho:.6g} >= 1: spillovers explode"
            )
        a = np.linalg.solve(eye - model.alpha * beta * sg, model.alpha * sigma)
        a[sigma == 0] = 0.0
        return _finish(net, model, sigma, a)

    def f(y):
        return team_performance(g, actions_at(y), beta) - y

    if bracket is None:
        lo = lower_bracket(model, beta * rho, f)
        hi = expand_upper(f, 2.0 * lo)
    else:
        lo, hi = bracket
    y = bisect_decreasing(f, lo, hi)
    return _finish(net, model, sigma, actions_at(y))


def bonacich_diagnostics(
    net: WeightedNetwork, model: SuccessModel, alloc: EquityAllocation, result: EquilibriumResult
) -> BonacichDiagnostics:
    """Endogenous Bonacich matrix M = P'(y*)[I - beta P'(y*) Sigma G]^-1 and its centralities.

    ``b`` holds the column sums of M and ``b_bar = M.T @ b``.
    """
    p = model.deriv(result.performance)
    resolvent = np.eye(net.n) - model.beta * p * alloc.shares[:, None] * net.weights
    if np.linalg.cond(resolvent) > 1e12:
        raise SpectralInfeasibleError("resolvent I - beta P' Sigma G is singular")
    m = p * np.linalg.inv(resolvent)
    b = m.sum(axis=0)
    return BonacichDiagnostics(M=m, b=b, b_bar=m.T @ b)


def verify_nash(
    net: WeightedNetwork,
    model: SuccessModel,
    alloc: EquityAllocation,
    result: EquilibriumResult,
    grid: int = 1000,
) -> float:
    """Largest payoff gain from a unilateral deviation found on a grid.

    Each agent's deviations span ``[0, 2 max(a*) + 1]`` with the others held
    at ``result.actions``; the agent's current action is always a candidate,
    so the answer is never negative.
    """
    a = np.asarray(result.actions, dtype=float)
    sigma = alloc.shares
    candidates = np.linspace(0.0, 2.0 * float(np.max(a, initial=0.0)) + 1.0, grid + 1)
    worst = 0.0
    for i in range(net.n):
        trial = np.tile(a, (candidates.size + 1, 1))
        trial[:-1, i] = candidates
        y = team_performance(net, trial, model.beta)
        payoff = model.prob(y) * sigma[i] - 0.5 * trial[:, i] ** 2
        worst = max(worst, float(np.max(payoff) - payoff[-1]))
    return worst
