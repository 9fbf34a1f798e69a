import itertools
import math

import pytest
from hypothesis import given, strategies as st

from elicitgame import (
    EFFORT_PROFILES,
    EA,
    OA,
    SV,
    EffortProfile,
    Mechanism,
    MechanismKind,
    Params,
    check_budget_balance,
    shapley,
    shares,
    shares_ea,
    shares_oa,
    shares_sv,
    team_accuracy,
)

from conftest import enumerate_agreement

accuracies = st.floats(0.5, 1.0, exclude_min=True)


def permutation_shapley(e, params):
    """Shapley values by averaging marginal contributions over all join orders."""
    players = (0, 1)

    def worth(coalition):
        return team_accuracy(EffortProfile(*(e[m] if m in coalition else 0 for m in players)), params)

    phi = [0.0, 0.0]
    orders = list(itertools.permutations(players))
    for order in orders:
        joined = set()
        for m in order:
            before = worth(joined)
            joined.add(m)
            phi[m] += (worth(joined) - before) / len(orders)
    return phi


@pytest.mark.parametrize("e", EFFORT_PROFILES)
def test_ea_constant(e):
    assert shares_ea(e) == (0.5, 0.5)


def test_oa_values():
    p = Params(a=0.8)
    assert shares_oa(EffortProfile(1, 1), p) == pytest.approx((0.34, 0.34))
    assert shares_oa(EffortProfile(1, 0), p) == (0.25, 0.25)
    q = Params(a=1.0)
    assert shares_oa(EffortProfile(0, 0), q) == (0.25, 0.25)
    assert shares_oa(EffortProfile(1, 1), q) == (0.5, 0.5)


@given(accuracies)
def test_oa_matches_enumerated_agreement(a):
    p = Params(a=a)
    for e in EFFORT_PROFILES:
        expected = enumerate_agreement(e, a) / 2
        assert shares_oa(e, p) == pytest.approx((expected, expected), abs=1e-12)


def test_oa_lone_effort_does_not_help():
    p = Params(a=0.8)
    assert shares_oa(EffortProfile(1, 0), p) == shares_oa(EffortProfile(0, 0), p) == (0.25, 0.25)


@given(st.floats(0.5, 1.0))
def test_oa_both_effort_share_range(a):
    s = shares_oa(EffortProfile(1, 1), Params(a=a)).p_high
    assert 0.25 - 1e-15 <= s <= 0.5 + 1e-15


def test_oa_both_effort_share_endpoints():
    assert shares_oa(EffortProfile(1, 1), Params(a=0.5)).p_high == 0.25
    assert shares_oa(EffortProfile(1, 1), Params(a=1.0)).p_high == 0.5


def test_shapley_examples():
    p = Params(a=0.8)
    assert shapley(EffortProfile(1, 1), p) == pytest.approx((0.15, 0.15))
    assert shapley(EffortProfile(1, 0), p) == pytest.approx((0.15, 0.0))
    assert shapley(EffortProfile(0, 0), p) == (0.0, 0.0)


@given(accuracies)
def test_shapley_matches_permutation_formula(a):
    p = Params(a=a)
    for e in EFFORT_PROFILES:
        assert shapley(e, p) == pytest.approx(permutation_shapley(e, p), abs=1e-12)


@given(accuracies)
def test_shapley_efficiency_and_sign(a):
    p = Params(a=a)
    for e in EFFORT_PROFILES:
        phi = shapley(e, p)
        assert min(phi) >= 0
        assert phi.phi_high + phi.phi_low == pytest.approx(team_accuracy(e, p) - 0.5, abs=1e-15)


def test_sv_shares():
    p = Params(a=0.8)
    assert shares_sv(EffortProfile(1, 0), p) == pytest.approx((1.0, 0.0))
    assert shares_sv(EffortProfile(0, 1), p) == pytest.approx((0.0, 1.0))
    assert shares_sv(EffortProfile(1, 1), p) == pytest.approx((0.5, 0.5))
    assert shares_sv(EffortProfile(0, 0), p) == (0.5, 0.5)
    assert shares_sv(EffortProfile(0, 0), p, zero_rule="none") == (0.0, 0.0)


@given(accuracies)
def test_sv_effort_never_lowers_own_share(a):
    p = Params(a=a)
    for other in (0, 1):
        assert shares_sv(EffortProfile(1, other), p).p_high >= shares_sv(EffortProfile(0, other), p).p_high
        assert shares_sv(EffortProfile(other, 1), p).p_low >= shares_sv(EffortProfile(other, 0), p).p_low


def test_budget_balance_examples():
    p = Params(a=0.8)
    for e in EFFORT_PROFILES:
        assert check_budget_balance(EA, e, p).balanced
        assert check_budget_balance(SV, e, p).balanced
    weak = check_budget_balance(OA, EffortProfile(1, 0), p)
    assert not weak.balanced and weak.deficit == pytest.approx(0.5)
    assert str(weak).startswith("WeaklyBalanced")
    none_rule = Mechanism(MechanismKind.SV, sv_zero_rule="none")
    assert check_budget_balance(none_rule, EffortProfile(0, 0), p).deficit == 1.0


@given(accuracies)
def test_oa_budget_balanced_only_with_perfect_accuracy(a):
    p = Params(a=a)
    for e in EFFORT_PROFILES:
        total = shares(OA, e, p).total
        assert total <= 1 + 1e-15
        if math.isclose(total, 1.0):
            assert e == (1, 1) and a == pytest.approx(1.0)
