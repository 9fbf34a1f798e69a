"""Two-member decentralized information elicitation game.

Members first choose whether to pay a fixed volume ``D`` into a shared
incentive pool, then whether to exert costly effort on a binary task. The
pool is redistributed by one of three mechanisms (equal split, output
agreement, Shapley value). The package evaluates payoffs exactly, finds
subgame-perfect equilibria by brute force, checks the analytic formulas
with a report-level simulator, and sweeps the ``(c, D)`` plane.
"""

__version__ = "0.1.0"

from .core import (
    EA,
    EFFORT_PROFILES,
    OA,
    SV,
    ContributionProfile,
    EffortProfile,
    Mechanism,
    MechanismKind,
    Params,
    ValidationReport,
    contribution_profiles,
    regime_threshold,
    validate,
)
from .accuracy import majority, member_accuracy, team_accuracy
from .mechanisms import (
    AllocationShares,
    ShapleyPair,
    check_budget_balance,
    shapley,
    shares,
    shares_ea,
    shares_oa,
    shares_sv,
)
from .game import (
    EquilibriumOutcome,
    NoPureEquilibrium,
    PayoffVector,
    StageGame,
    payoff,
    pure_nash,
    solve_spe,
    stage2_game,
)
from .analysis import (
    BoundaryEstimate,
    DominanceReport,
    SweepGrid,
    compare,
    find_boundaries,
    series,
    sweep,
)
from .montecarlo import SimConfig, SimEstimate, simulate, truthfulness_gap

__all__ = [
    "EA",
    "EFFORT_PROFILES",
    "OA",
    "SV",
    "ContributionProfile",
    "EffortProfile",
    "Mechanism",
    "MechanismKind",
    "Params",
    "ValidationReport",
    "contribution_profiles",
    "regime_threshold",
    "validate",
    "majority",
    "member_accuracy",
    "team_accuracy",
    "AllocationShares",
    "ShapleyPair",
    "check_budget_balance",
    "shapley",
    "shares",
    "shares_ea",
    "shares_oa",
    "shares_sv",
    "EquilibriumOutcome",
    "NoPureEquilibrium",
    "PayoffVector",
    "StageGame",
    "payoff",
    "pure_nash",
    "solve_spe",
    "stage2_game",
    "BoundaryEstimate",
    "DominanceReport",
    "SweepGrid",
    "compare",
    "find_boundaries",
    "series",
    "sweep",
    "SimConfig",
    "SimEstimate",
    "simulate",
    "truthfulness_gap",
]
