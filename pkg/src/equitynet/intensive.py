"""Optimal shares on a fixed active set: equity centrality and neighbourhood balance."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .equilibrium import ACTIVE_EPS, EquilibriumResult, EquityAllocation, lower_bracket
from .errors import (
    InvalidActiveSetError,
    InvalidInputError,
    NoEquilibriumLinearPError,
    SingularSubnetworkError,
)
from .network import AgentSet, WeightedNetwork, agent_set, restrict
from .numerics import bisect_decreasing, expand_upper
from .success_model import SuccessModel

log = logging.getLogger(__name__)

MAX_CONDITION = 1e12

# centrality_batch status codes
REGULAR, SINGULAR, SINGULAR_CONSISTENT = 0, 1, 2


@dataclass(frozen=True, eq=False)
class IntensiveSolution:
    active_set: AgentSet
    shares: np.ndarray  # length n, exact zeros off the active set
    c: float
    x: np.ndarray  # equity centralities on the active set (induced order)
    k_star: float  # 1' x
    total: float
    singular: bool = False  # x is the min-norm witness of a consistent singular system

    def allocation(self) -> EquityAllocation:
        return EquityAllocation(self.shares)


class PredictedEquilibrium(NamedTuple):
    mu: float
    actions: np.ndarray
    performance: float


class BalanceReport(NamedTuple):
    equity_spread: float
    action_spread: float


def centrality_batch(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve W x = 1 for a stack of symmetric matrices via the SVD.

    Returns ``(x, status)``. Matrices with condition number above 1e12 are
    SINGULAR unless the truncated system is still consistent, in which case
    ``x`` is its minimum-norm solution and the status is SINGULAR_CONSISTENT.
    """
    mats = np.asarray(mats, dtype=float)
    k = mats.shape[-1]
    u, sv, vt = np.linalg.svd(mats)
    top = sv[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(sv[:, -1] > 0, top / sv[:, -1], np.inf)
    keep = sv > top[:, None] / MAX_CONDITION
    inv_sv = np.where(keep, 1.0 / np.where(keep, sv, 1.0), 0.0)
    ut1 = u.sum(axis=1)  # U^T 1, row-wise
    x = np.einsum("mij,mi->mj", vt, inv_sv * ut1)
    status = np.full(mats.shape[0], REGULAR)
    singular = ~(cond <= MAX_CONDITION)
    if np.any(singular):
        resid = np.max(np.abs(np.einsum("mij,mj->mi", mats, x) - 1.0), axis=1)
        consistent = singular & (resid <= 1e-9) & (top > 0)
        status[singular] = SINGULAR
        status[consistent] = SINGULAR_CONSISTENT
    if k == 0:
        status[:] = SINGULAR
    return x, status


def equity_centrality(subnet) -> np.ndarray:
    """x = W^-1 1 for a nonsingular (sub)network weight matrix W."""
    w = subnet.weights if isinstance(subnet, WeightedNetwork) else np.asarray(subnet, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InvalidInputError("equity centrality needs a square matrix")
    x, status = centrality_batch(w[None])
    if status[0] != REGULAR:
        raise SingularSubnetworkError("subnetwork weight matrix is singular (condition > 1e12)")
    return x[0]


def allocate_on_set(
    net: WeightedNetwork, members: Iterable[int], s: float = 1.0, allow_singular: bool = False
) -> IntensiveSolution:
    """Balanced allocation of total share ``s`` over ``members``: sigma = (s / 1'x) x.

    With ``allow_singular`` a singular subnetwork whose balance system is
    still solvable (e.g. the antipodal circulant) is accepted through the
    min-norm solution; c = s / 1'x does not depend on which solution is used.
    """
    if not 0 < s <= 1:
        raise InvalidInputError(f"total share must lie in (0, 1], got {s}")
    idx = agent_set(members, net.n)
    x, status = centrality_batch(restrict(net, idx)[None])
    x, status = x[0], int(status[0])
    if status == SINGULAR or (status == SINGULAR_CONSISTENT and not allow_singular):
        log.debug("rejecting singular support %s", idx)
        raise SingularSubnetworkError(f"subnetwork on {idx} is singular")
    if np.any(x <= ACTIVE_EPS):
        raise InvalidActiveSetError(f"support {idx} has nonpositive equity centralities {x}")
    k_star = float(x.sum())
    c = s / k_star
    shares = np.zeros(net.n)
    shares[list(idx)] = c * x
    return IntensiveSolution(idx, shares, c, x, k_star, s, singular=status == SINGULAR_CONSISTENT)


def balanced_performance(model: SuccessModel, s: float, c: float) -> float:
    """Fixed point of Y = s (P'/(1 - beta P' c) + beta P'^2 c / (2 (1 - beta P' c)^2))."""
    beta = model.beta

    def rhs(p):
        d = 1.0 - beta * p * c
        return s * (p / d + beta * p * p * c / (2.0 * d * d))

    if model.is_linear:
        if model.alpha * beta * c >= 1.0:
            raise NoEquilibriumLinearPError(f"1 - alpha*beta*c = {1 - model.alpha * beta * c:.3g} <= 0")
        y = rhs(model.alpha)
        model.check_operative(y)
        return y

    def f(y):
        return rhs(model.deriv(y)) - y

    lo = lower_bracket(model, beta * c, f)
    return bisect_decreasing(f, lo, expand_upper(f, 2.0 * lo))


def predicted_equilibrium(net: WeightedNetwork, model: SuccessModel, sol: IntensiveSolution) -> PredictedEquilibrium:
    """Equilibrium implied by balance: a* = mu sigma, mu = P'(Y*) / (1 - P'(Y*) beta c)."""
    y = balanced_performance(model, sol.total, sol.c)
    p = model.deriv(y)
    mu = p / (1.0 - p * model.beta * sol.c)
    return PredictedEquilibrium(mu, mu * sol.shares, y)


def check_balance(net: WeightedNetwork, alloc: EquityAllocation, result: EquilibriumResult) -> BalanceReport:
    """Spreads of (G sigma)_i and (G a*)_i around their means over active agents."""
    idx = list(alloc.active)
    if not idx:
        return BalanceReport(0.0, 0.0)
    w = restrict(net, idx)
    eq = w @ alloc.shares[idx]
    act = w @ np.asarray(result.actions)[idx]
    return BalanceReport(float(np.max(np.abs(eq - eq.mean()))), float(np.max(np.abs(act - act.mean()))))
