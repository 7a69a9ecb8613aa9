"""Outer optimisation over the total share for the two principal objectives."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .equilibrium import EquilibriumResult, EquityAllocation, solve_equilibrium
from .errors import (
    EquityNetError,
    InfeasibleComplementarityError,
    InvalidInputError,
    KinkReachedError,
    NoInteriorOptimumError,
)
from .extensive import MAX_N_ENUM, SearchReport, search_active_set, search_active_set_unweighted
from .intensive import BalanceReport, IntensiveSolution, allocate_on_set, balanced_performance, check_balance
from .network import AgentSet, WeightedNetwork, is_unweighted
from .numerics import bisect_decreasing, golden_section_max
from .success_model import SuccessModel

log = logging.getLogger(__name__)

OBJECTIVES = ("sp", "rp")
GRID_POINTS = 64
S_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OptimalContract:
    objective: str
    allocation: EquityAllocation
    active_set: AgentSet
    c: float
    s_star: float
    equilibrium: EquilibriumResult
    principal_value: float
    x: np.ndarray
    k_star: float
    mu: float
    balance: BalanceReport
    search: SearchReport
    ties: list[AgentSet] = field(default_factory=list)

    @property
    def shares(self) -> np.ndarray:
        return self.allocation.shares

    def to_json(self) -> dict:
        return {
            "objective": self.objective,
            "active_set": list(self.active_set),
            "shares": self.shares.tolist(),
            "c": self.c,
            "s_star": self.s_star,
            "k_star": self.k_star,
            "mu": self.mu,
            "performance": self.equilibrium.performance,
            "success_prob": self.equilibrium.success_prob,
            "actions": self.equilibrium.actions.tolist(),
            "agent_payoffs": self.equilibrium.agent_payoffs.tolist(),
            "objective_value": self.principal_value,
            "equity_spread": self.balance.equity_spread,
            "action_spread": self.balance.action_spread,
            "ties": [list(t) for t in self.ties],
            "search_method": self.search.method,
        }


def _parse_objective(objective: str) -> str:
    obj = str(objective).lower()
    if obj not in OBJECTIVES:
        raise InvalidInputError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    return obj


def performance_slope(model: SuccessModel, s: float, k_star: float, y: float) -> float:
    """dY*/ds along the balanced path c = s / k*, by implicit differentiation."""
    b = model.beta
    c = s / k_star
    u = model.deriv(y)
    d = 1.0 - b * u * c
    phi = u / d + b * u * u * c / (2.0 * d * d)
    phi_u = 1.0 / d + 2.0 * b * u * c / d**2 + (b * u * c) ** 2 / d**3
    phi_c = 1.5 * b * u * u / d**2 + b * b * u**3 * c / d**3
    return (phi + s * phi_c / k_star) / (1.0 - s * phi_u * model.second_deriv(y))


def rp_value(model: SuccessModel, k_star: float, s: float) -> float:
    """V(s) = (1 - s) P(Y*(s)) along the balanced allocation with c = s / k*."""
    return (1.0 - s) * model.prob(balanced_performance(model, s, s / k_star))


def rp_value_slope(model: SuccessModel, k_star: float, s: float) -> float:
    y = balanced_performance(model, s, s / k_star)
    return -model.prob(y) + (1.0 - s) * model.deriv(y) * performance_slope(model, s, k_star, y)


def _maximise_rp(model: SuccessModel, k_star: float) -> float:
    """Grid scan, golden-section refinement, then a slope polish."""

    def safe(s):
        try:
            return rp_value(model, k_star, s)
        except EquityNetError:
            return -np.inf

    grid = np.linspace(0.0, 1.0, GRID_POINTS + 1)
    vals = np.array([safe(s) for s in grid[1:-1]])
    if not np.any(np.isfinite(vals)) or np.max(vals) <= 0:
        raise NoInteriorOptimumError("V(s) has no positive interior value; check the success model")
    i = int(np.argmax(vals)) + 1
    lo, hi = grid[i - 1], grid[i + 1]
    s = golden_section_max(safe, lo, hi, tol=S_TOL)
    # V is smooth, so the exact slope pins s* down to rounding level
    try:
        g_lo = rp_value_slope(model, k_star, lo) if lo > 0 else np.inf
        g_hi = rp_value_slope(model, k_star, hi)
        if g_lo > 0 > g_hi:
            s = bisect_decreasing(lambda t: rp_value_slope(model, k_star, t), lo, hi, rtol=1e-14)
    except EquityNetError as exc:
        log.debug("slope polish skipped: %s", exc)
    if not 0 < s < 1:
        raise NoInteriorOptimumError(f"optimum s={s} is not interior")
    slope = rp_value_slope(model, k_star, s)  # raises KinkReached past a cap
    if abs(slope) > 1e-7:
        if model.is_linear:
            raise KinkReachedError(f"RP optimum is pressed against the cap of P (dV/ds={slope:.3g} at s={s:.6g})")
        raise NoInteriorOptimumError(f"no stationary point of V(s) found (dV/ds={slope:.3g} at s={s:.6g})")
    return float(s)


def _search(net: WeightedNetwork, max_n_enum: int) -> SearchReport:
    if net.n > max_n_enum and is_unweighted(net):
        return search_active_set_unweighted(net)
    return search_active_set(net, max_n_enum=max_n_enum)


def optimize(
    net: WeightedNetwork,
    model: SuccessModel,
    objective: str = "sp",
    max_n_enum: int = MAX_N_ENUM,
) -> OptimalContract:
    """Optimal equity contract.

    The support and share ratios come from the extensive search at s = 1;
    they do not depend on s or beta, so only the total share is left. Under
    SP it is 1, under RP it maximises (1 - s) P(Y*(s)).
    """
    obj = _parse_objective(objective)
    report = _search(net, max_n_enum)
    base: IntensiveSolution = report.best.solution
    if obj == "sp":
        s = 1.0
    else:
        s = _maximise_rp(model, base.k_star)
    sol = allocate_on_set(net, base.active_set, s, allow_singular=True)
    alloc = sol.allocation()
    eq = solve_equilibrium(net, model, alloc)
    p = eq.marginal
    mu = p / (1.0 - p * model.beta * sol.c)
    value = eq.principal_value if obj == "rp" else eq.success_prob
    return OptimalContract(
        objective=obj,
        allocation=alloc,
        active_set=sol.active_set,
        c=sol.c,
        s_star=s,
        equilibrium=eq,
        principal_value=value,
        x=sol.x,
        k_star=sol.k_star,
        mu=mu,
        balance=check_balance(net, alloc, eq),
        search=report,
        ties=[t.members for t in report.ties],
    )


def rp_linear_closed_form(k_star: float, alpha: float, beta: float) -> float:
    """Optimal RP total share for linear P: root in (1/2, 1) of

    p(s) = -(beta alpha)^2 s^3 + 3 beta alpha k s^2 - 4 k^2 s + 2 k^2.
    """
    if not (k_star > 0 and alpha > 0 and beta > 0):
        raise InvalidInputError("k_star, alpha and beta must be positive")
    ba = beta * alpha
    if ba >= k_star:
        raise InfeasibleComplementarityError(f"beta*alpha = {ba:.6g} >= k* = {k_star:.6g}")
    k = k_star

    def p(s):
        return -(ba**2) * s**3 + 3.0 * ba * k * s**2 - 4.0 * k * k * s + 2.0 * k * k

    return bisect_decreasing(p, 0.5, 1.0, rtol=1e-15)


@dataclass(frozen=True)
class SweepPoint:
    value: float
    contract: OptimalContract | None
    error: str | None = None


def sweep(
    build: Callable[[float], tuple[WeightedNetwork, SuccessModel]],
    values: Sequence[float],
    objective: str = "sp",
    workers: int = 1,
    max_n_enum: int = MAX_N_ENUM,
) -> list[SweepPoint]:
    """Re-optimise independently at every parameter value (no warm starts).

    Results come back in the order of ``values`` whatever the thread count.
    """
    obj = _parse_objective(objective)

    def one(v):
        try:
            net, model = build(float(v))
            return SweepPoint(float(v), optimize(net, model, obj, max_n_enum))
        except EquityNetError as exc:
            return SweepPoint(float(v), None, f"{type(exc).__name__}: {exc}")

    if workers <= 1:
        return [one(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, values))
