import itertools
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from elicitgame import (
    EA,
    OA,
    SV,
    ContributionProfile,
    EffortProfile,
    NoPureEquilibrium,
    Params,
    payoff,
    pure_nash,
    solve_spe,
    stage2_game,
)
from elicitgame.game import (
    Candidate,
    PayoffVector,
    StageGame,
    region_label,
    select_max_welfare,
    select_min_welfare,
    stage1_game,
)


def brute_force_nash(table, tol):
    """Pure NE from the definition: compare each cell with every unilateral deviation."""
    out = []
    for i, j in itertools.product(range(2), range(2)):
        h_ok = all(table[i][j][0] >= table[k][j][0] - tol for k in range(2))
        l_ok = all(table[i][j][1] >= table[i][k][1] - tol for k in range(2))
        if h_ok and l_ok:
            out.append((i, j))
    return out


def test_payoff_baseline(base):
    for mech in (EA, OA, SV):
        assert payoff((0, 0), (0, 0), mech, base) == (1.0, 0.5)


def test_payoff_sv_yellow_profile(base):
    p = base.with_(c=0.32, D=0.1)
    assert payoff((0, 0.1), (1, 0), SV, p) == pytest.approx((1.08, 0.55))


def test_payoff_oa_orange_profile(base):
    # 2*0.8 + 0.34*0.4 - 0.4 - 0.18 and 0.8 + 0.34*0.4 - 0.18
    p = base.with_(c=0.18, D=0.4)
    assert payoff((0.4, 0), (1, 1), OA, p) == pytest.approx((1.156, 0.756))


def test_stage2_table_ea(base):
    g = stage2_game(ContributionProfile(0, 0), EA, base.with_(c=0.2))
    u_h = {(i, j): g.table[i, j, 0] for i in (0, 1) for j in (0, 1)}
    assert u_h == pytest.approx({(0, 0): 1.0, (1, 0): 1.1, (0, 1): 1.3, (1, 1): 1.4})


def test_stage2_asymmetric_valuations(base):
    g = stage2_game(ContributionProfile(0, 0), OA, base)
    assert not np.allclose(g.table[:, :, 0], g.table[:, :, 1].T)
    sym = stage2_game(ContributionProfile(0, 0), OA, base.with_(v_high=1.0))
    assert np.allclose(sym.table[:, :, 0], sym.table[:, :, 1].T)


def test_stage2_sv_non_exerter_gets_nothing(base):
    g = stage2_game(ContributionProfile(0.1, 0), SV, base.with_(c=0.32, D=0.1))
    assert g.table[1, 0, 1] == pytest.approx(0.65)


def test_pure_nash_theorem_branches(base):
    d = ContributionProfile(0, 0)
    assert pure_nash(stage2_game(d, EA, base.with_(c=0.1))) == [(1, 1)]
    assert pure_nash(stage2_game(d, EA, base.with_(c=0.4))) == [(0, 0)]


def test_pure_nash_degenerate_and_empty():
    flat = StageGame("effort", ((0, 1), (0, 1)), np.ones((2, 2, 2)))
    assert pure_nash(flat) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    pennies = np.array([[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]], dtype=float)
    assert pure_nash(StageGame("effort", ((0, 1), (0, 1)), pennies)) == []
    with pytest.raises(ValueError):
        pure_nash(flat, tolerance=-1)


@settings(max_examples=200)
@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_pure_nash_matches_definition(values):
    table = np.array(values, dtype=float).reshape(2, 2, 2)
    got = pure_nash(StageGame("effort", ((0, 1), (0, 1)), table), tolerance=0.0)
    assert got == brute_force_nash(table.tolist(), 0.0)


@pytest.mark.parametrize(
    "mech, c, D, label",
    [
        (EA, 0.2, 0.15, "d=(0,0),e=(1,0)"),
        (EA, 0.2, 0.7, "d=(0,0),e=(1,0)"),
        (SV, 0.32, 0.1, "d=(0,D),e=(1,0)"),
        (OA, 0.18, 0.4, "d=(D,0),e=(1,1)"),
    ],
)
def test_solve_spe_examples(base, mech, c, D, label):
    out = solve_spe(mech, base.with_(c=c, D=D))
    assert out.label == label
    assert out.welfare == pytest.approx(sum(out.payoffs))
    assert out.label == region_label(out.d_star, out.e_star)


def test_outcome_record_fields(base):
    rec = solve_spe(OA, base.with_(c=0.18, D=0.4)).to_record()
    assert list(rec) == [
        "mechanism", "c", "D", "d_high", "d_low", "e_high", "e_low",
        "u_high", "u_low", "accuracy", "welfare", "label", "multiplicity",
    ]
    assert rec["d_high"] == 0.4 and rec["d_low"] == 0.0
    assert rec["accuracy"] == pytest.approx(0.8)


def test_stage1_uses_selected_continuations(base):
    p = base.with_(c=0.32, D=0.1)
    game, conts = stage1_game(SV, p)
    # after L alone contributes, H exerts effort and takes the whole pool
    assert conts[(0, 1)].e == (1, 0)
    assert game.payoffs(0, 1) == pytest.approx((1.08, 0.55))
    # with no contributions nobody works at this cost
    assert conts[(0, 0)].e == (0, 0)


def test_no_pure_equilibrium_outside_regime():
    p = Params(a=0.9, c=1.0, D=0.5, v_high=4, v_low=3)
    with pytest.raises(NoPureEquilibrium) as info:
        solve_spe(SV, p)
    assert "no pure NE" in info.value.diagnostic


@pytest.mark.parametrize("mech", [EA, OA, SV])
def test_effort_ordering_on_random_points(base, mech):
    rng = np.random.default_rng(7)
    for c, D in rng.uniform([0.001, 0.001], [0.6, 1.0], size=(300, 2)):
        out = solve_spe(mech, base.with_(c=float(c), D=float(D)))
        assert out.e_star.e_high >= out.e_star.e_low


def test_ea_never_contributes(base):
    for c in np.linspace(0.01, 0.6, 25):
        for D in np.linspace(0.01, 1.0, 25):
            assert solve_spe(EA, base.with_(c=float(c), D=float(D))).d_star == (0, 0)


def test_deterministic_under_threads(base):
    points = [base.with_(c=float(c), D=float(D)) for c in np.linspace(0.05, 0.45, 12) for D in (0.1, 0.4, 0.7)]
    serial = [solve_spe(SV, p) for p in points]
    with ThreadPoolExecutor(4) as ex:
        parallel = list(ex.map(lambda p: solve_spe(SV, p), points))
    assert serial == parallel


@pytest.mark.parametrize("mech", [EA, OA, SV])
def test_tolerance_robust_away_from_boundaries(base, mech):
    # boundary-free interior points of each region
    points = [(0.1, 0.2), (0.2, 0.1), (0.2, 0.4), (0.32, 0.1), (0.4, 0.5), (0.25, 0.7)]
    for c, D in points:
        p = base.with_(c=c, D=D)
        labels = {solve_spe(mech, p, tolerance=t).label for t in (0.0, 1e-12, 1e-10, 1e-9)}
        assert len(labels) == 1


def test_selection_rules():
    mk = lambda d, e, u, acc: Candidate(ContributionProfile(*d), EffortProfile(*e), PayoffVector(*u), acc)
    low = mk((0, 0), (0, 0), (1.0, 0.5), 0.5)
    high = mk((0.1, 0), (1, 1), (1.2, 0.6), 0.8)
    assert select_max_welfare([low, high]) is high
    assert select_min_welfare([low, high]) is low
    # equal welfare and accuracy: prefer less contribution
    a = mk((0.1, 0), (1, 0), (1.0, 0.5), 0.65)
    b = mk((0, 0), (1, 0), (1.0, 0.5), 0.65)
    assert select_max_welfare([a, b]) is b


def test_selection_rule_by_name(base):
    p = base.with_(c=0.18, D=0.4)
    assert solve_spe(OA, p, "welfare") == solve_spe(OA, p)
    assert solve_spe(OA, p, "pessimistic").label
