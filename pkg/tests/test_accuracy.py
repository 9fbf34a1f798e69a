import numpy as np
import pytest
from hypothesis import given, strategies as st

from elicitgame import EFFORT_PROFILES, EffortProfile, Params, majority, member_accuracy, team_accuracy

from conftest import enumerate_team_accuracy


@pytest.mark.parametrize(
    "r_h, r_l, coin, expected",
    [(1, 1, -1, 1), (-1, -1, 1, -1), (1, -1, -1, -1), (1, -1, 1, 1), (-1, 1, -1, -1)],
)
def test_majority(r_h, r_l, coin, expected):
    assert majority(r_h, r_l, coin) == expected


def test_majority_vectorised():
    out = majority(np.array([1, -1, 1, -1]), np.array([1, -1, -1, 1]), np.array([-1, 1, 1, -1]))
    assert out.tolist() == [1, -1, 1, -1]


def test_member_accuracy():
    assert member_accuracy(0, Params(a=0.8)) == 0.5
    assert member_accuracy(1, Params(a=0.8)) == 0.8
    assert member_accuracy(1, Params(a=1.0)) == 1.0
    with pytest.raises(ValueError):
        member_accuracy(2, Params())


@pytest.mark.parametrize("e, expected", [((0, 0), 0.5), ((1, 0), 0.65), ((0, 1), 0.65), ((1, 1), 0.8)])
def test_team_accuracy_values(e, expected):
    assert team_accuracy(EffortProfile(*e), Params(a=0.8)) == pytest.approx(expected)


@given(st.floats(0.5, 1.0))
def test_team_accuracy_matches_enumeration(a):
    p = Params(a=a)
    for e in EFFORT_PROFILES:
        assert team_accuracy(e, p) == pytest.approx(enumerate_team_accuracy(e, a), abs=1e-12)


@given(st.floats(0.5 + 1e-9, 1.0))
def test_monotone_symmetric_ordered(a):
    p = Params(a=a)
    none, one, both = (team_accuracy(EffortProfile(*e), p) for e in ((0, 0), (1, 0), (1, 1)))
    assert team_accuracy(EffortProfile(0, 1), p) == one
    assert none < one < both
    assert none == 0.5 and both == a


def test_ordering_collapses_at_half():
    p = Params(a=0.5)
    assert team_accuracy(EffortProfile(0, 0), p) == team_accuracy(EffortProfile(1, 0), p) == 0.5
