import itertools

import pytest

from elicitgame import Params


@pytest.fixture
def base():
    """The experiment setting a=0.8, V_L=1, V_H=2."""
    return Params(a=0.8, c=0.18, D=0.15, v_high=2.0, v_low=1.0)


def enumerate_team_accuracy(e, a):
    """Exact Pr(team answer == truth) by enumerating truth, both solutions and the tie coin."""
    total = 0.0
    for truth, ok_h, ok_l, coin in itertools.product((1, -1), (True, False), (True, False), (1, -1)):
        q = [a if e[0] else 0.5, a if e[1] else 0.5]
        prob = 0.5 * 0.5
        prob *= q[0] if ok_h else 1 - q[0]
        prob *= q[1] if ok_l else 1 - q[1]
        x_h = truth if ok_h else -truth
        x_l = truth if ok_l else -truth
        s = x_h + x_l
        team = 1 if s > 0 else -1 if s < 0 else coin
        total += prob * (team == truth)
    return total


def enumerate_agreement(e, a):
    """Exact Pr(reports agree) by enumeration."""
    total = 0.0
    for truth, ok_h, ok_l in itertools.product((1, -1), (True, False), (True, False)):
        q = [a if e[0] else 0.5, a if e[1] else 0.5]
        prob = 0.5 * (q[0] if ok_h else 1 - q[0]) * (q[1] if ok_l else 1 - q[1])
        total += prob * (ok_h == ok_l)
    return total


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {name}: {detail}")
