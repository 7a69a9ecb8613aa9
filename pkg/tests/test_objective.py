import numpy as np
import pytest

from equitynet.equilibrium import EquityAllocation, solve_equilibrium
from equitynet.errors import InfeasibleComplementarityError, InvalidInputError
from equitynet.objective import optimize, rp_linear_closed_form, rp_value_slope
from equitynet.success_model import CappedLinear, Saturating
from equitynet.verify import full_support_net


def test_sp_triangle(triangle, saturating):
    c = optimize(triangle, saturating, "sp")
    assert c.s_star == 1.0
    assert np.allclose(c.shares, [0.409091, 0.363636, 0.227273], atol=1e-6)
    assert c.principal_value == pytest.approx(c.equilibrium.success_prob)


def test_rp_pair(pair, linear_half):
    c = optimize(pair, linear_half, "rp")
    assert c.s_star == pytest.approx(0.5253, abs=1e-4)
    assert np.allclose(c.shares, 0.2627, atol=1e-4)
    assert abs(c.s_star - rp_linear_closed_form(2.0, 0.5, 0.5)) <= 1e-8
    assert abs(rp_value_slope(linear_half, c.k_star, c.s_star)) <= 1e-8


def test_closed_form_examples():
    s = rp_linear_closed_form(2.0, 0.5, 0.5)
    assert s == pytest.approx(0.5253, abs=1e-4)
    assert rp_linear_closed_form(2.0, 0.5, 1e-9) == pytest.approx(0.5, abs=1e-8)
    assert rp_linear_closed_form(2.0, 0.5, 1.0) > s
    assert 0.5 < rp_linear_closed_form(2.0, 0.5, 3.999) < 1.0
    with pytest.raises(InfeasibleComplementarityError):
        rp_linear_closed_form(2.0, 0.5, 4.0)


def test_bad_objective(pair, linear_half):
    with pytest.raises(InvalidInputError):
        optimize(pair, linear_half, "welfare")


def test_total_share_rises_with_beta():
    rng = np.random.default_rng(4)
    net, k_star = full_support_net(rng, 4)
    alpha = 0.3
    betas = np.linspace(0.05, 0.8 * k_star / alpha, 20)
    s = np.array([optimize(net, CappedLinear(beta=b, alpha=alpha), "rp").s_star for b in betas])
    assert np.all(np.diff(s) > 0)
    closed = [rp_linear_closed_form(k_star, alpha, b) for b in betas]
    assert np.max(np.abs(s - closed)) <= 1e-8


def test_sp_shares_do_not_depend_on_beta(triangle):
    shares = [optimize(triangle, Saturating(beta=b), "sp").shares for b in (0.05, 0.2, 0.5)]
    assert all(np.array_equal(shares[0], s) for s in shares)


@pytest.mark.parametrize("model", [Saturating(beta=0.6, kappa=0.9, lam=1.2), CappedLinear(beta=0.3, alpha=0.6)])
def test_rp_optimum_beats_grid(triangle, model):
    """End-to-end: V(s*) against 1000 grid points each solved from scratch."""
    c = optimize(triangle, model, "rp")
    ratios = c.shares / c.s_star
    best = c.principal_value
    for s in np.linspace(0.001, 0.999, 1000):
        v = solve_equilibrium(triangle, model, EquityAllocation(s * ratios)).principal_value
        assert v <= best + 1e-12


def test_balance_in_contract(triangle, saturating):
    for obj in ("sp", "rp"):
        c = optimize(triangle, saturating, obj)
        assert c.balance.equity_spread <= 1e-12 and c.balance.action_spread <= 1e-12
        assert np.allclose(c.equilibrium.actions, c.mu * c.shares, rtol=1e-10)
