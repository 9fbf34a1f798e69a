"""Payoffs, stage games and equilibrium solvers.

Both stages are 2x2 normal-form games. The two-stage game is solved by
backward induction: every contribution profile gets one selected Stage-II
equilibrium, and those continuation payoffs define the Stage-I game.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .accuracy import team_accuracy
from .core import (
    ContributionProfile,
    EffortProfile,
    Mechanism,
    MechanismKind,
    Params,
    as_mechanism,
    contribution_profiles,
)
from .mechanisms import shares

DEFAULT_TOL = 1e-12


class PayoffVector(NamedTuple):
    u_high: float
    u_low: float

    @property
    def welfare(self) -> float:
        return self.u_high + self.u_low


def payoff(
    d: ContributionProfile,
    e: EffortProfile,
    mech: Mechanism | MechanismKind | str,
    params: Params,
) -> PayoffVector:
    """Expected payoff of both members.

    ``U_m = V_m * P_T(e) + p_m(e) * (d_H + d_L) - d_m - c * e_m``
    """
    d = ContributionProfile(*d)
    e = EffortProfile(*e)
    acc = team_accuracy(e, params)
    p = shares(mech, e, params)
    pool = d.pool
    u_h = params.v_high * acc + p.p_high * pool - d.d_high - params.c * e.e_high
    u_l = params.v_low * acc + p.p_low * pool - d.d_low - params.c * e.e_low
    return PayoffVector(u_h, u_l)


@dataclass(frozen=True)
class StageGame:
    """A 2x2 game.

    ``table[i, j]`` holds ``(u_H, u_L)`` when H plays ``actions[0][i]`` and L
    plays ``actions[1][j]``.
    """

    stage: str
    actions: tuple[tuple, tuple]
    table: np.ndarray

    def payoffs(self, i: int, j: int) -> PayoffVector:
        return PayoffVector(float(self.table[i, j, 0]), float(self.table[i, j, 1]))


def stage2_game(d: ContributionProfile, mech: Mechanism | MechanismKind | str, params: Params) -> StageGame:
    """Effort game induced by a fixed contribution profile."""
    table = np.empty((2, 2, 2))
    for i in (0, 1):
        for j in (0, 1):
            table[i, j] = payoff(d, EffortProfile(i, j), mech, params)
    return StageGame("effort", ((0, 1), (0, 1)), table)


def pure_nash(game: StageGame, tolerance: float = DEFAULT_TOL) -> list[tuple]:
    """All pure profiles where no player gains more than ``tolerance`` by deviating.

    Returned as action pairs in lexicographic index order.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    t = game.table
    n_h, n_l = t.shape[0], t.shape[1]
    found = []
    for i in range(n_h):
        for j in range(n_l):
            best_h = max(t[k, j, 0] for k in range(n_h))
            best_l = max(t[i, k, 1] for k in range(n_l))
            if t[i, j, 0] >= best_h - tolerance and t[i, j, 1] >= best_l - tolerance:
                found.append((game.actions[0][i], game.actions[1][j]))
    return found


class NoPureEquilibrium(Exception):
    """Some subgame, or Stage I itself, has no pure Nash equilibrium."""

    def __init__(self, diagnostic: str):
        super().__init__(diagnostic)
        self.diagnostic = diagnostic


class Candidate(NamedTuple):
    d: ContributionProfile
    e: EffortProfile
    payoffs: PayoffVector
    accuracy: float


SelectionRule = Callable[[Sequence[Candidate]], Candidate]


def _filter_best(cands, key, tol):
    best = max(key(c) for c in cands)
    return [c for c in cands if key(c) >= best - tol]


def select_max_welfare(candidates: Sequence[Candidate], tol: float = 1e-9) -> Candidate:
    """Canonical rule: highest welfare, then accuracy, then more effort, then less contribution."""
    if not candidates:
        raise ValueError("no candidates to select from")
    cands = _filter_best(list(candidates), lambda c: c.payoffs.welfare, tol)
    cands = _filter_best(cands, lambda c: c.accuracy, tol)
    return min(cands, key=lambda c: (-c.e[0], -c.e[1], c.d[0], c.d[1]))


def select_min_welfare(candidates: Sequence[Candidate], tol: float = 1e-9) -> Candidate:
    """Pessimistic rule for sensitivity probes: lowest welfare, then less effort."""
    if not candidates:
        raise ValueError("no candidates to select from")
    cands = _filter_best(list(candidates), lambda c: -c.payoffs.welfare, tol)
    return min(cands, key=lambda c: (c.accuracy, c.e[0], c.e[1], c.d[0], c.d[1]))


def select_first(candidates: Sequence[Candidate]) -> Candidate:
    """Lexicographically first equilibrium, ignoring payoffs."""
    return candidates[0]


SELECTION_RULES: dict[str, SelectionRule] = {
    "welfare": select_max_welfare,
    "pessimistic": select_min_welfare,
    "first": select_first,
}


def region_label(d: ContributionProfile, e: EffortProfile) -> str:
    """Canonical label such as ``d=(0,D),e=(1,0)``."""
    fh, fl = ContributionProfile(*d).flags
    sym = ("0", "D")
    return f"d=({sym[fh]},{sym[fl]}),e=({e[0]},{e[1]})"


@dataclass(frozen=True)
class EquilibriumOutcome:
    mechanism: str
    params: Params
    d_star: ContributionProfile
    e_star: EffortProfile
    payoffs: PayoffVector
    team_accuracy: float
    welfare: float
    label: str
    multiplicity: int

    def to_record(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "c": self.params.c,
            "D": self.params.D,
            "d_high": self.d_star.d_high,
            "d_low": self.d_star.d_low,
            "e_high": self.e_star.e_high,
            "e_low": self.e_star.e_low,
            "u_high": self.payoffs.u_high,
            "u_low": self.payoffs.u_low,
            "accuracy": self.team_accuracy,
            "welfare": self.welfare,
            "label": self.label,
            "multiplicity": self.multiplicity,
        }


def _candidate(d, e, mech, params) -> Candidate:
    e = EffortProfile(*e)
    return Candidate(ContributionProfile(*d), e, payoff(d, e, mech, params), team_accuracy(e, params))


def continuation(
    d: ContributionProfile,
    mech: Mechanism,
    params: Params,
    selection: SelectionRule = select_max_welfare,
    tolerance: float = DEFAULT_TOL,
) -> Candidate:
    """Selected Stage-II equilibrium after contributions ``d``."""
    eqs = pure_nash(stage2_game(d, mech, params), tolerance)
    if not eqs:
        raise NoPureEquilibrium(
            f"effort subgame after contribution flags {ContributionProfile(*d).flags} has no pure NE "
            f"({mech}, c={params.c}, D={params.D})"
        )
    return selection([_candidate(d, e, mech, params) for e in eqs])


def stage1_game(
    mech: Mechanism | MechanismKind | str,
    params: Params,
    selection: SelectionRule = select_max_welfare,
    tolerance: float = DEFAULT_TOL,
) -> tuple[StageGame, dict[tuple[int, int], Candidate]]:
    """Contribution game with continuation payoffs, plus the continuations."""
    mech = as_mechanism(mech)
    conts = {}
    table = np.empty((2, 2, 2))
    for d in contribution_profiles(params.D):
        cont = continuation(d, mech, params, selection, tolerance)
        conts[d.flags] = cont
        table[d.flags] = cont.payoffs
    game = StageGame("contribution", ((0.0, params.D), (0.0, params.D)), table)
    return game, conts


def solve_spe(
    mech: Mechanism | MechanismKind | str,
    params: Params,
    selection: SelectionRule | str = select_max_welfare,
    tolerance: float = DEFAULT_TOL,
) -> EquilibriumOutcome:
    """Subgame-perfect equilibrium of the two-stage game by backward induction.

    Raises :class:`NoPureEquilibrium` when some stage has no pure equilibrium.
    """
    mech = as_mechanism(mech)
    if isinstance(selection, str):
        selection = SELECTION_RULES[selection]
    game, conts = stage1_game(mech, params, selection, tolerance)
    eqs = pure_nash(game, tolerance)
    if not eqs:
        raise NoPureEquilibrium(f"contribution stage has no pure NE ({mech}, c={params.c}, D={params.D})")
    cands = [conts[ContributionProfile(*d).flags] for d in eqs]
    chosen = selection(cands)
    return EquilibriumOutcome(
        mechanism=mech.name,
        params=params,
        d_star=chosen.d,
        e_star=chosen.e,
        payoffs=chosen.payoffs,
        team_accuracy=chosen.accuracy,
        welfare=chosen.payoffs.welfare,
        label=region_label(chosen.d, chosen.e),
        multiplicity=len(eqs),
    )
