"""Desk-scale invariant suite shared by the acceptance tests and ``equitynet verify``."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import compstat
from .analytic_oracles import (
    ThreeAgentSpec,
    g_star,
    oracle_network,
    spectral_radius_certificate,
    three_agent_contract,
    three_agent_network,
)
from .equilibrium import (
    EquityAllocation,
    bonacich_diagnostics,
    solve_equilibrium,
    verify_nash,
)
from .errors import ActiveSetUnstableError, EquityNetError, KinkReachedError
from .extensive import brute_force_oracle, search_active_set
from .intensive import allocate_on_set
from .network import WeightedNetwork, clique_number, diameter
from .numerics import bisect_decreasing, spectral_radius_sigma_g
from .objective import optimize, sweep
from .success_model import CappedLinear, Saturating, SuccessModel


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_weighted(rng: np.random.Generator, n: int, p: float = 0.6, low: float = 0.1) -> WeightedNetwork:
    while True:
        upper = np.triu((rng.random((n, n)) < p) * rng.uniform(low, 1.0, (n, n)), 1)
        if np.any(upper > 0):
            return WeightedNetwork(upper + upper.T)


def random_unweighted(rng: np.random.Generator, n: int, p: float) -> WeightedNetwork:
    while True:
        upper = np.triu(rng.random((n, n)) < p, 1).astype(float)
        if np.any(upper > 0):
            return WeightedNetwork(upper + upper.T)


def random_model(rng: np.random.Generator, linear: bool) -> SuccessModel:
    if linear:
        return CappedLinear(beta=rng.uniform(0.05, 0.5), alpha=rng.uniform(0.2, 0.9))
    return Saturating(beta=rng.uniform(0.05, 1.0), kappa=rng.uniform(0.5, 0.95), lam=rng.uniform(0.5, 2.0))


def full_support_net(rng: np.random.Generator, n: int) -> tuple[WeightedNetwork, float]:
    """Complete weighted network whose optimal support is everyone; returns k*."""
    while True:
        net = random_weighted(rng, n, p=1.0, low=0.5)
        best = search_active_set(net).best
        if len(best.members) == n:
            return net, best.solution.k_star


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


# 1. equilibrium correctness


def criterion_1(seed: int = 0, cases: int = 200) -> CheckResult:
    rng = np.random.default_rng([seed, 1])
    worst_res = worst_gain = 0.0
    done = 0
    t0 = time.perf_counter()
    while done < cases:
        n = int(rng.integers(2, 9))
        net = random_weighted(rng, n)
        shares = rng.dirichlet(np.ones(n)) * rng.uniform(0.1, 1.0)
        shares[rng.random(n) < 0.2] = 0.0
        alloc = EquityAllocation(shares)
        if done % 2:
            rho = spectral_radius_sigma_g(shares, net.weights)
            alpha = rng.uniform(0.1, 0.5)
            beta = rng.uniform(0.05, 0.8) / (alpha * rho) if rho > 0 else 1.0
            model = CappedLinear(beta=beta, alpha=alpha)
        else:
            model = Saturating(beta=rng.uniform(0.05, 3.0), kappa=rng.uniform(0.3, 0.95), lam=rng.uniform(0.3, 3.0))
        try:
            res = solve_equilibrium(net, model, alloc)
        except KinkReachedError:
            continue  # instance beyond the linear regime; draw another
        worst_res = max(worst_res, res.residual)
        worst_gain = max(worst_gain, verify_nash(net, model, alloc, res, grid=1000))
        done += 1
    secs = time.perf_counter() - t0
    ok = worst_res <= 1e-10 and worst_gain <= 1e-6 and secs < 10.0
    return CheckResult("equilibrium correctness", ok,
                       f"{cases} cases, max FOC residual {worst_res:.2e}, max deviation gain {worst_gain:.2e}")


# 2. balance at the optimum


def criterion_2(seed: int = 0, cases: int = 100) -> CheckResult:
    rng = np.random.default_rng([seed, 2])
    worst = {"spread": 0.0, "ratio": 0.0, "bonacich": 0.0}
    for case in range(cases):
        n = int(rng.integers(2, 7))
        net = random_weighted(rng, n, p=0.7)
        model = random_model(rng, linear=case % 2 == 0)
        contract = optimize(net, model, "sp" if case % 4 < 2 else "rp")
        eq = contract.equilibrium
        idx = list(contract.active_set)
        ratio = eq.actions[idx] / contract.shares[idx]
        diag = bonacich_diagnostics(net, model, contract.allocation, eq)
        worst["spread"] = max(worst["spread"], contract.balance.equity_spread, contract.balance.action_spread)
        worst["ratio"] = max(worst["ratio"], float(np.max(np.abs(ratio - contract.mu))))
        worst["bonacich"] = max(worst["bonacich"], float(np.max(np.abs(diag.b[idx] - contract.mu))))
    ok = worst["spread"] <= 1e-9 and worst["ratio"] <= 1e-9 and worst["bonacich"] <= 1e-8
    return CheckResult("balance at the optimum", ok,
                       f"{cases} contracts, spread {worst['spread']:.1e}, |a/sigma - mu| {worst['ratio']:.1e}, "
                       f"|b - mu| {worst['bonacich']:.1e}")


# 3. pruned search vs brute force


def criterion_3(seed: int = 0, cases: int = 500) -> CheckResult:
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    wide = 0
    for _ in range(cases):
        n = int(rng.integers(2, 7))
        net = random_weighted(rng, n, p=rng.choice([0.3, 0.5, 0.7, 1.0]))
        fast = search_active_set(net)
        slow = brute_force_oracle(net)
        worst = max(worst, abs(fast.best.c_per_unit - slow.best.c_per_unit) / slow.best.c_per_unit)
        wide += diameter(net, fast.best.members) > 2
    ok = worst <= 1e-9 and wide == 0
    return CheckResult("pruned search equals brute force", ok,
                       f"{cases} networks, max rel gap {worst:.1e}, winners with diameter > 2: {wide}")


# 4. cliques on unweighted networks


def criterion_4(seed: int = 0, cases: int = 200) -> CheckResult:
    rng = np.random.default_rng([seed, 4])
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 13))
        net = random_unweighted(rng, n, float(rng.choice([0.3, 0.5, 0.7])))
        k = clique_number(net)
        worst = max(worst, abs(search_active_set(net).best.c_per_unit - (k - 1) / k))
    circ = oracle_network("circulant_ex2", 10)
    report = search_active_set(circ)
    tie_c = {t.members: t.c_per_unit for t in report.ties}
    cliques = [tuple(sorted(p[b] for p, b in zip([(i, i + 5) for i in range(5)], bits)))
               for bits in itertools.product((0, 1), repeat=5)]
    wanted = cliques + [tuple(range(10))]
    tie_ok = all(m in tie_c and abs(tie_c[m] - 0.8) <= 1e-12 for m in wanted)
    ok = worst <= 1e-12 and tie_ok
    return CheckResult("max-clique optimum", ok,
                       f"{cases} graphs, max |c - (k-1)/k| {worst:.1e}; circulant tie over full set and "
                       f"{len(cliques)} five-cliques: {tie_ok}")


# 5. three-agent closed forms


def _ratio12_slope(g13: float, g23: float, model: SuccessModel) -> float:
    net = three_agent_network(g13, g23)
    contract = optimize(net, model, "sp")
    d = compstat.d_shares_d_weight(net, contract, (1, 2))
    return compstat.d_share_ratio(contract.shares, d, 0, 1)


def locate_g_star(g13: float, model: SuccessModel | None = None) -> float:
    """Numerical zero of d(sigma_1/sigma_2)/dG_23 on (1 - g13, g13)."""
    model = model or CappedLinear(beta=0.1, alpha=0.5)
    lo, hi = 1.0 - g13 + 1e-3, g13 - 1e-3
    return bisect_decreasing(lambda g: _ratio12_slope(g13, g, model), lo, hi, rtol=1e-13)


def criterion_5(seed: int = 0) -> CheckResult:
    grid = np.linspace(0.05, 1.0, 20)
    worst = 0.0
    wrong_support = 0
    for g13 in grid:
        for t in grid:
            g23 = t * g13
            ref = three_agent_contract(ThreeAgentSpec(g13, g23))
            best = search_active_set(three_agent_network(g13, g23)).best
            sol = allocate_on_set(three_agent_network(g13, g23), best.members, 1.0)
            worst = max(worst, float(np.max(np.abs(sol.shares - ref.shares))), abs(sol.c - ref.c))
            gap = g13 + g23 - 1.0
            if abs(gap) > 1e-7:
                wrong_support += best.members != ((0, 1, 2) if gap > 0 else (0, 1))
    switch_err = 0.0
    for g13 in (0.6, 0.7, 0.8, 0.9):
        net_of = lambda g: three_agent_network(g13, g)  # noqa: E731
        lo, hi = 1.0 - g13 - 0.05, 1.0 - g13 + 0.05
        # c(full) - c(pair) is quadratic in g13 + g23 - 1, so near the switch the
        # pair wins the tie-break; track when the full set becomes optimal at all
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if (0, 1, 2) in [c.members for c in search_active_set(net_of(mid)).ties]:
                hi = mid
            else:
                lo = mid
        switch_err = max(switch_err, abs(hi - (1.0 - g13)))
    root = locate_g_star(0.8)
    ok = worst <= 1e-9 and wrong_support == 0 and switch_err <= 1e-7 and abs(root - g_star(0.8)) <= 1e-4
    return CheckResult("three-agent closed forms", ok,
                       f"400 grid points, max gap {worst:.1e}, wrong supports {wrong_support}, switch offset "
                       f"{switch_err:.1e}, sign change at {root:.6f} vs g* {g_star(0.8):.6f}")


# 6. link-weight sweep shape


def fig2_sweep(steps: int = 100, workers: int = 1):
    values = np.linspace(0.25, 0.79, steps)
    model = CappedLinear(beta=0.1, alpha=0.9)
    return sweep(lambda v: (three_agent_network(0.8, v), model), values, "rp", workers=workers)


def _monotone(col: np.ndarray) -> bool:
    d = np.diff(col)
    return bool(np.all(d >= 0) or np.all(d <= 0))


def criterion_6(seed: int = 0) -> CheckResult:
    points = fig2_sweep()
    if any(p.contract is None for p in points):
        return CheckResult("link-weight sweep shape", False, "sweep had failed points")
    sigma2 = np.array([p.contract.shares[1] for p in points])
    u = np.array([p.contract.equilibrium.agent_payoffs for p in points])
    k = int(np.argmin(sigma2))
    interior = 0 < k < len(sigma2) - 1
    ok = interior and not _monotone(sigma2) and not _monotone(u[:, 0]) and not _monotone(u[:, 1])
    return CheckResult("link-weight sweep shape", ok,
                       f"sigma_2 minimum at G23={points[k].value:.4f} (interior: {interior}); "
                       f"U1 monotone: {_monotone(u[:, 0])}, U2 monotone: {_monotone(u[:, 1])}")


# 7. comparative statics


def prop5_spread(net: WeightedNetwork, model: SuccessModel, contract) -> tuple[float, float]:
    """(spread of dY/dG_ij / (sigma_i sigma_j) over active pairs, closed-form vs general gap)."""
    ratios, gap = [], 0.0
    for i, j in itertools.combinations(contract.active_set, 2):
        general = compstat.d_performance_d_weight_general(net, model, contract.allocation, contract.equilibrium, i, j)
        closed = compstat.d_performance_d_weight(net, model, contract, i, j)
        ratios.append(general / (contract.shares[i] * contract.shares[j]))
        gap = max(gap, abs(closed - general) / abs(general))
    ratios = np.array(ratios)
    return float((ratios.max() - ratios.min()) / abs(ratios.mean())), gap


def criterion_7(seed: int = 0, cases: int = 50) -> CheckResult:
    rng = np.random.default_rng([seed, 7])
    h = compstat.FD_STEP
    share_err = p5_spread = p5_gap = fd_err = 0.0
    done = 0
    while done < cases:
        n = int(rng.integers(4, 7))
        net, _ = full_support_net(rng, n)
        model = random_model(rng, linear=done % 2 == 0)
        contract = optimize(net, model, "sp")
        j, k = (int(v) for v in rng.choice(n, 2, replace=False))
        try:
            d = compstat.d_shares_d_weight(net, contract, (j, k))
        except ActiveSetUnstableError:
            continue
        w = net.weights[j, k]
        up = optimize(net.with_weight(j, k, w + h), model, "sp").shares
        down = optimize(net.with_weight(j, k, w - h), model, "sp").shares
        share_err = max(share_err, _rel(d, (up - down) / (2 * h)))
        spread, gap = prop5_spread(net, model, contract)
        p5_spread, p5_gap = max(p5_spread, spread), max(p5_gap, gap)
        y_up = compstat.perf_at_fixed_shares(net.with_weight(j, k, w + h), model, contract.allocation)
        y_down = compstat.perf_at_fixed_shares(net.with_weight(j, k, w - h), model, contract.allocation)
        fd_err = max(fd_err, _rel(compstat.d_performance_d_weight(net, model, contract, j, k), (y_up - y_down) / (2 * h)))
        done += 1
    # total share rises with complementarity; cubic root vs numerical optimum
    mono_ok, path_gap = True, 0.0
    alpha = 0.2
    for _ in range(3):
        net, k_star = full_support_net(rng, int(rng.integers(2, 6)))
        betas = np.linspace(0.05, 0.8 * k_star / alpha, 20)
        curve = np.array(compstat.total_share_curve(net, alpha, betas))
        mono_ok &= bool(np.all(np.diff(curve) > 0))
        for b, s in zip(betas, curve):
            path_gap = max(path_gap, abs(optimize(net, CappedLinear(beta=b, alpha=alpha), "rp").s_star - s))
    ok = share_err <= 1e-4 and p5_spread <= 1e-8 and p5_gap <= 1e-8 and fd_err <= 1e-4 and mono_ok and path_gap <= 1e-8
    return CheckResult("comparative statics", ok,
                       f"share derivative rel err {share_err:.1e}; dY ratio spread {p5_spread:.1e}, "
                       f"closed vs implicit {p5_gap:.1e}, vs FD {fd_err:.1e}; s*(beta) increasing: {mono_ok}, "
                       f"cubic vs search {path_gap:.1e}")


# 8. beta invariance


def criterion_8(seed: int = 0, cases: int = 10) -> CheckResult:
    rng = np.random.default_rng([seed, 8])
    betas = (0.05, 0.2, 0.5)
    sp_drift = rp_drift = 0.0
    nets = [three_agent_network(0.8, 0.6)] + [random_weighted(rng, int(rng.integers(2, 7))) for _ in range(cases - 1)]
    for case, net in enumerate(nets):
        if case % 2:
            models = [CappedLinear(beta=b, alpha=0.5) for b in betas]
        else:
            models = [Saturating(beta=b, kappa=0.9, lam=1.0) for b in betas]
        sp = np.array([optimize(net, m, "sp").shares for m in models])
        rp = [optimize(net, m, "rp") for m in models]
        ratios = np.array([c.shares / c.s_star for c in rp])
        sp_drift = max(sp_drift, float(np.max(np.abs(sp - sp[0]))))
        rp_drift = max(rp_drift, float(np.max(np.abs(ratios - ratios[0]))))
    ok = sp_drift <= 1e-12 and rp_drift <= 1e-9
    return CheckResult("beta invariance", ok,
                       f"{len(nets)} networks, SP share drift {sp_drift:.1e}, RP ratio drift {rp_drift:.1e}")


# 9. spectral radius maximisation


def criterion_9(seed: int = 0, trials: int = 10_000) -> CheckResult:
    rng = np.random.default_rng([seed, 9])
    t0 = time.perf_counter()
    nets = [three_agent_network(0.8, 0.6), oracle_network("clique", 3), oracle_network("star", 5)]
    nets += [random_weighted(rng, n, p=0.6) for n in range(3, 9) for _ in range(2)]
    model = Saturating(beta=0.2, kappa=0.9, lam=1.0)
    worst = np.inf
    eig_gap = 0.0
    for i, net in enumerate(nets):
        contract = optimize(net, model, "sp")
        cert = spectral_radius_certificate(net, contract, trials=trials, seed=seed * 1000 + i)
        worst = min(worst, cert.margin)
        eig_gap = max(eig_gap, abs(cert.rho_star - contract.c))
    secs = time.perf_counter() - t0
    ok = worst >= -1e-9 and eig_gap <= 1e-9 and secs < 30.0
    return CheckResult("spectral radius maximisation", ok,
                       f"{len(nets)} SP contracts x {trials} rivals, min margin {worst:.2e}, |rho* - c| {eig_gap:.1e}")


CRITERIA: list[Callable[..., CheckResult]] = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9,
]


def run_criterion(number: int, seed: int = 0) -> CheckResult:
    fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        res = fn(seed)
    except EquityNetError as exc:
        res = CheckResult(fn.__name__, False, f"raised {type(exc).__name__}: {exc}")
    return CheckResult(f"{number}. {res.name}", res.passed, res.detail, time.perf_counter() - t0)


def run_all(seed: int = 0) -> list[CheckResult]:
    return [run_criterion(i, seed) for i in range(1, len(CRITERIA) + 1)]
