"""Optimal equity allocation for teams with network complementarities."""
from .analytic_oracles import (
    ThreeAgentSpec,
    clique_circle_star_oracle,
    g_star,
    spectral_radius_certificate,
    three_agent_contract,
)
from .compstat import d_performance_d_weight, d_shares_d_weight, total_share_curve
from .equilibrium import (
    EquilibriumResult,
    EquityAllocation,
    bonacich_diagnostics,
    solve_equilibrium,
    team_performance,
    verify_nash,
)
from .errors import *  # noqa: F401,F403
from .extensive import brute_force_oracle, search_active_set, search_active_set_unweighted
from .intensive import allocate_on_set, check_balance, equity_centrality, predicted_equilibrium
from .network import WeightedNetwork, diameter, load_network, max_clique, restrict
from .objective import OptimalContract, optimize, rp_linear_closed_form
from .success_model import CappedLinear, Saturating, model_from_config

__version__ = "0.1.0"
