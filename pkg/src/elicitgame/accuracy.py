"""Majority aggregation and solution accuracy."""

from __future__ import annotations

import numpy as np

from .core import EffortProfile, Params


def majority(r_high, r_low, tiebreak):
    """Aggregate two reports in {+1, -1} by majority with a supplied tie coin.

    Works elementwise on arrays, which is how the simulator calls it.
    """
    total = np.add(r_high, r_low)
    out = np.where(total > 0, 1, np.where(total < 0, -1, tiebreak))
    if np.ndim(out) == 0:
        return int(out)
    return out


def member_accuracy(e: int, params: Params) -> float:
    """Probability that a member's private solution is correct."""
    if e not in (0, 1):
        raise ValueError(f"effort must be 0 or 1, got {e!r}")
    return params.a if e else 0.5


def team_accuracy(e: EffortProfile, params: Params) -> float:
    """Probability that the majority-aggregated solution is correct."""
    n = e[0] + e[1]
    if n == 0:
        return 0.5
    if n == 1:
        return (2 * params.a + 1) / 4
    return params.a
