"""Incentive allocation mechanisms.

Each mechanism maps an effort profile to the expected fractions of the
incentive pool received by H and L. Report-level randomness is already
integrated out here; realized allocations live in :mod:`elicitgame.montecarlo`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .accuracy import team_accuracy
from .core import EffortProfile, Mechanism, MechanismKind, Params, as_mechanism

BB_TOL = 1e-12


class AllocationShares(NamedTuple):
    p_high: float
    p_low: float

    @property
    def total(self) -> float:
        return self.p_high + self.p_low


class ShapleyPair(NamedTuple):
    phi_high: float
    phi_low: float


def shares_ea(e: EffortProfile) -> AllocationShares:
    return AllocationShares(0.5, 0.5)


def agreement_probability(e: EffortProfile, params: Params) -> float:
    """Probability that the two truthful reports coincide."""
    if e[0] and e[1]:
        a = params.a
        return a * a + (1 - a) * (1 - a)
    return 0.5


def shares_oa(e: EffortProfile, params: Params) -> AllocationShares:
    """Output agreement: the pool is split evenly only when reports agree.

    With both members exerting effort each expects ``(2a^2 - 2a + 1) / 2``;
    otherwise the other report is a fair coin and each expects 1/4.
    """
    s = agreement_probability(e, params) / 2
    return AllocationShares(s, s)


def _coalition_accuracy(e: EffortProfile, members: tuple[bool, bool], params: Params) -> float:
    # non-members contribute no effort
    restricted = EffortProfile(e[0] if members[0] else 0, e[1] if members[1] else 0)
    return team_accuracy(restricted, params)


def shapley(e: EffortProfile, params: Params) -> ShapleyPair:
    """Shapley value of each member in the team-accuracy coalition game.

    The worth of a coalition is the team accuracy obtained when everyone
    outside it exerts no effort. With two players each ordering has weight 1/2.
    """
    e = EffortProfile(*e)
    empty = _coalition_accuracy(e, (False, False), params)
    only_h = _coalition_accuracy(e, (True, False), params)
    only_l = _coalition_accuracy(e, (False, True), params)
    both = _coalition_accuracy(e, (True, True), params)
    phi_h = 0.5 * (only_h - empty) + 0.5 * (both - only_l)
    phi_l = 0.5 * (only_l - empty) + 0.5 * (both - only_h)
    return ShapleyPair(phi_h, phi_l)


def shares_sv(e: EffortProfile, params: Params, zero_rule: str = "equal") -> AllocationShares:
    """Pool fractions proportional to Shapley values.

    At ``e = (0, 0)`` both values are zero; ``zero_rule="equal"`` returns an
    even split and ``"none"`` returns nothing (the pool is burned).
    """
    phi = shapley(e, params)
    total = phi.phi_high + phi.phi_low
    if total <= 0:
        if zero_rule == "none":
            return AllocationShares(0.0, 0.0)
        return AllocationShares(0.5, 0.5)
    return AllocationShares(phi.phi_high / total, phi.phi_low / total)


def shares(mech: Mechanism | MechanismKind | str, e: EffortProfile, params: Params) -> AllocationShares:
    """Dispatch to the allocation rule of ``mech``."""
    mech = as_mechanism(mech)
    e = EffortProfile(*e)
    if mech.kind is MechanismKind.EA:
        return shares_ea(e)
    if mech.kind is MechanismKind.OA:
        return shares_oa(e, params)
    return shares_sv(e, params, mech.sv_zero_rule)


@dataclass(frozen=True)
class BudgetCheck:
    balanced: bool
    deficit: float

    def __str__(self):
        return "Balanced" if self.balanced else f"WeaklyBalanced(deficit={self.deficit:.6g})"


def check_budget_balance(
    mech: Mechanism | MechanismKind | str, e: EffortProfile, params: Params, tol: float = BB_TOL
) -> BudgetCheck:
    """Compare the allocated fraction of the pool against 1.

    Raises ``ValueError`` if a mechanism hands out more than the pool, which
    would break even weak budget balance.
    """
    total = shares(mech, e, params).total
    deficit = 1.0 - total
    if deficit < -tol:
        raise ValueError(f"{as_mechanism(mech)} allocates {total} > 1 of the pool")
    if abs(deficit) <= tol:
        return BudgetCheck(True, 0.0)
    return BudgetCheck(False, deficit)
