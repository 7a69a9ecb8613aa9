"""Link-weight and complementarity comparative statics of the optimal contract."""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .equilibrium import EquilibriumResult, EquityAllocation, solve_equilibrium
from .errors import ActiveSetUnstableError, InvalidInputError
from .extensive import MAX_N_ENUM, search_active_set
from .network import WeightedNetwork, restrict
from .objective import OptimalContract, optimize, rp_linear_closed_form
from .success_model import SuccessModel

FD_STEP = 1e-5


class LinkPerturbation(NamedTuple):
    j: int
    k: int


def _link(contract: OptimalContract, pert) -> LinkPerturbation:
    j, k = (int(v) for v in pert)
    if j == k:
        raise InvalidInputError("a link needs two distinct agents")
    if j not in contract.active_set or k not in contract.active_set:
        raise InvalidInputError(f"agents {j} and {k} must both be active")
    return LinkPerturbation(j, k)


def _check_stable(net: WeightedNetwork, contract: OptimalContract, pert: LinkPerturbation, h: float):
    w = net.weights[pert.j, pert.k]
    for step in (-h, h):
        if w + step < 0:
            raise ActiveSetUnstableError("weight cannot be perturbed below zero")
        moved = search_active_set(net.with_weight(pert.j, pert.k, w + step), max_n_enum=max(net.n, MAX_N_ENUM))
        if moved.best.members != contract.active_set:
            raise ActiveSetUnstableError(
                f"active set moves from {contract.active_set} to {moved.best.members} at G_jk{step:+g}"
            )


def d_shares_d_weight(
    net: WeightedNetwork,
    contract: OptimalContract,
    pert,
    model: SuccessModel | None = None,
    h: float = FD_STEP,
) -> np.ndarray:
    """d sigma* / d G_jk (both link entries move together).

    d sigma_i = -(W^-1)_ik sigma_j - (W^-1)_ij sigma_k + (dc / dG_jk) sigma_i / c
    on the active set W. Under SP dc/dG_jk = 2 c^2 x_j x_k / s; under RP c also
    moves through s*, and its slope is taken by central differences of the
    full pipeline.
    """
    link = _link(contract, pert)
    _check_stable(net, contract, link, h)
    idx = list(contract.active_set)
    winv = np.linalg.inv(restrict(net, idx))
    pj, pk = idx.index(link.j), idx.index(link.k)
    sig = contract.shares[idx]
    c = contract.c
    if contract.objective == "sp":
        dc = 2.0 * c * c * contract.x[pj] * contract.x[pk] / contract.s_star
    else:
        if model is None:
            raise InvalidInputError("the RP share derivative needs the success model")
        w = net.weights[link.j, link.k]
        up = optimize(net.with_weight(link.j, link.k, w + h), model, "rp").c
        down = optimize(net.with_weight(link.j, link.k, w - h), model, "rp").c
        dc = (up - down) / (2.0 * h)
    d = -winv[:, pk] * sig[pj] - winv[:, pj] * sig[pk] + dc * sig / c
    out = np.zeros(net.n)
    out[idx] = d
    return out


def d_share_ratio(shares: np.ndarray, d_shares: np.ndarray, num: int, den: int) -> float:
    """Derivative of sigma_num / sigma_den from shares and their derivatives."""
    return float((d_shares[num] * shares[den] - shares[num] * d_shares[den]) / shares[den] ** 2)


def _h_factor(beta: float, c: float, s: float, p1: float, p2: float) -> float:
    d = 1.0 - beta * c * p1
    return beta * p1 * p1 * (2.0 / d**3 + 1.0 / d**2) / (1.0 - p2 * s / d**3)


def d_performance_d_weight(net: WeightedNetwork, model: SuccessModel, contract: OptimalContract, i: int, j: int) -> float:
    """dY*/dG_ij at the optimal allocation with shares held fixed: sigma_i sigma_j h."""
    if i == j or i not in contract.active_set or j not in contract.active_set:
        raise InvalidInputError(f"need two distinct active agents, got {i}, {j}")
    y = contract.equilibrium.performance
    h = _h_factor(model.beta, contract.c, contract.s_star, model.deriv(y), model.second_deriv(y))
    return float(contract.shares[i] * contract.shares[j] * h)


def d_performance_d_weight_general(
    net: WeightedNetwork, model: SuccessModel, alloc: EquityAllocation, result: EquilibriumResult, i: int, j: int
) -> float:
    """dY*/dG_ij for an arbitrary allocation, by differentiating the equilibrium system.

    With g = 1 + beta G a and R = [I - beta P' Sigma G]^-1:
    dY (1 - P'' g'R Sigma g) = beta P' g'R Sigma (e_i a_j + e_j a_i) + beta a_i a_j.
    """
    g = net.weights
    a = np.asarray(result.actions, dtype=float)
    sigma = alloc.shares
    b = model.beta
    y = result.performance
    p1, p2 = model.deriv(y), model.second_deriv(y)
    grad = 1.0 + b * (g @ a)
    # row vector g' R via the transposed system
    gr = np.linalg.solve((np.eye(net.n) - b * p1 * sigma[:, None] * g).T, grad)
    dga = np.zeros(net.n)
    dga[i] += a[j]
    dga[j] += a[i]
    rhs = b * p1 * gr @ (sigma * dga) + b * a[i] * a[j]
    return float(rhs / (1.0 - p2 * gr @ (sigma * grad)))


def total_share_curve(net: WeightedNetwork, alpha: float, betas: Sequence[float]) -> list[float]:
    """s*(beta) for linear P via the cubic; the support does not depend on beta."""
    k_star = search_active_set(net).best.solution.k_star
    return [rp_linear_closed_form(k_star, alpha, float(b)) for b in betas]


def perf_at_fixed_shares(net: WeightedNetwork, model: SuccessModel, alloc: EquityAllocation) -> float:
    """Y* at fixed shares; a convenience for finite-difference checks."""
    return solve_equilibrium(net, model, alloc).performance
