"""Report-level simulator used as an independent check of the analytic formulas.

Every sample draws a ground truth, both private solutions, the reports, the
majority tie coin and the realized allocation. Per batch only integer
category counts are kept, so merging batches is exact and independent of
order; all means and standard errors are computed from the merged counts.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .accuracy import majority, member_accuracy
from .core import (
    ContributionProfile,
    EffortProfile,
    Mechanism,
    MechanismKind,
    Params,
    as_mechanism,
)
from .mechanisms import shares

GENERATOR = "PCG64"
DEFAULT_BATCH = 250_000


class Reporting(str, enum.Enum):
    TRUTHFUL = "truthful"
    ALWAYS_FLIP = "flip"


@dataclass(frozen=True)
class SimConfig:
    samples: int = 1_000_000
    seed: int = 20240101
    params: Params = field(default_factory=Params)
    reporting: tuple[Reporting, Reporting] = (Reporting.TRUTHFUL, Reporting.TRUTHFUL)
    batch_size: int = DEFAULT_BATCH
    threads: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        object.__setattr__(self, "reporting", tuple(Reporting(r) for r in self.reporting))


def _batches(cfg: SimConfig) -> list[tuple[int, np.random.SeedSequence]]:
    n_batches = -(-cfg.samples // cfg.batch_size)
    seqs = np.random.SeedSequence(cfg.seed).spawn(n_batches)
    sizes = [cfg.batch_size] * (n_batches - 1) + [cfg.samples - cfg.batch_size * (n_batches - 1)]
    return list(zip(sizes, seqs))


def _draw(n: int, seq: np.random.SeedSequence, e: EffortProfile, params: Params):
    """Ground truth, private solutions and tie coins for ``n`` samples."""
    rng = np.random.Generator(np.random.PCG64(seq))
    truth = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    u = rng.random((2, n))
    coin = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    solutions = []
    for m in (0, 1):
        correct = u[m] < member_accuracy(e[m], params)
        solutions.append(np.where(correct, truth, -truth).astype(np.int8))
    return truth, solutions, coin


def _outcome(truth, reports, coin):
    team = majority(reports[0], reports[1], coin)
    return (team == truth), (reports[0] == reports[1])


def _apply(solution, how: Reporting):
    return -solution if how is Reporting.ALWAYS_FLIP else solution


def _run(cfg: SimConfig, job):
    with ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else _Inline() as ex:
        parts = list(ex.map(job, _batches(cfg)))
    return np.sum(parts, axis=0)


class _Inline:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def map(self, fn, items):
        return map(fn, items)


@dataclass(frozen=True)
class SimEstimate:
    samples: int
    seed: int
    team_accuracy: float
    team_accuracy_se: float
    share: tuple[float, float]
    share_se: tuple[float, float]
    payoff: tuple[float, float]
    payoff_se: tuple[float, float]
    mechanism: str = ""
    generator: str = GENERATOR

    def to_record(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "generator": self.generator,
            "seed": self.seed,
            "samples": self.samples,
            "team_accuracy": self.team_accuracy,
            "team_accuracy_se": self.team_accuracy_se,
            "share_high": self.share[0],
            "share_low": self.share[1],
            "share_high_se": self.share_se[0],
            "share_low_se": self.share_se[1],
            "payoff_high": self.payoff[0],
            "payoff_low": self.payoff[1],
            "payoff_high_se": self.payoff_se[0],
            "payoff_low_se": self.payoff_se[1],
        }


def _realized_share(mech: Mechanism, e: EffortProfile, params: Params, agree: bool) -> tuple[float, float]:
    """Fraction of the pool each member receives in one sample."""
    if mech.kind is MechanismKind.OA:
        return (0.5, 0.5) if agree else (0.0, 0.0)
    # EA and SV do not look at the reports; SV reads the observed efforts
    return tuple(shares(mech, e, params))


def _mean_se(values: np.ndarray, counts: np.ndarray) -> tuple[float, float]:
    n = counts.sum()
    mean = float(np.dot(values, counts) / n)
    if n < 2:
        return mean, 0.0
    var = float(np.dot((values - mean) ** 2, counts) / (n - 1))
    return mean, math.sqrt(max(var, 0.0) / n)


def simulate(
    e: EffortProfile,
    d: ContributionProfile,
    mech: Mechanism | MechanismKind | str,
    cfg: SimConfig,
) -> SimEstimate:
    """Estimate team accuracy, pool shares and payoffs by sampling reports."""
    mech = as_mechanism(mech)
    e = EffortProfile(*e)
    d = ContributionProfile(*d)
    params = cfg.params

    def job(batch):
        n, seq = batch
        truth, sols, coin = _draw(n, seq, e, params)
        reports = [_apply(sols[m], cfg.reporting[m]) for m in (0, 1)]
        correct, agree = _outcome(truth, reports, coin)
        code = correct.astype(np.int64) * 2 + agree.astype(np.int64)
        return np.bincount(code, minlength=4)

    counts = _run(cfg, job)
    # category k: correct = k // 2, agree = k % 2
    correct = np.array([0, 0, 1, 1], dtype=float)
    acc, acc_se = _mean_se(correct, counts)
    share, share_se, pay, pay_se = [], [], [], []
    for m in (0, 1):
        s = np.array([_realized_share(mech, e, params, bool(k % 2))[m] for k in range(4)])
        u = params.valuation(m) * correct + s * d.pool - d[m] - params.c * e[m]
        sm, ss = _mean_se(s, counts)
        um, us = _mean_se(u, counts)
        share.append(sm)
        share_se.append(ss)
        pay.append(um)
        pay_se.append(us)
    return SimEstimate(
        samples=cfg.samples,
        seed=cfg.seed,
        team_accuracy=acc,
        team_accuracy_se=acc_se,
        share=tuple(share),
        share_se=tuple(share_se),
        payoff=tuple(pay),
        payoff_se=tuple(pay_se),
        mechanism=mech.name,
    )


@dataclass(frozen=True)
class TruthfulnessGap:
    """Paired payoff difference (truthful minus always-flip) per member."""

    gap: tuple[float, float]
    se: tuple[float, float]
    samples: int
    seed: int

    def passes(self, k_se: float = 3.0) -> tuple[bool, bool]:
        return tuple(g >= -k_se * s for g, s in zip(self.gap, self.se))


def truthfulness_gap(
    mech: Mechanism | MechanismKind | str,
    e: EffortProfile,
    d: ContributionProfile,
    cfg: SimConfig,
) -> TruthfulnessGap:
    """Gain from reporting truthfully over unilaterally flipping, for each member.

    Truthful and deviating play share every random draw (common random
    numbers), so the reported standard error is that of the paired difference.
    """
    mech = as_mechanism(mech)
    e = EffortProfile(*e)
    d = ContributionProfile(*d)
    params = cfg.params
    gaps, ses = [], []
    for m in (0, 1):

        def job(batch, m=m):
            n, seq = batch
            truth, sols, coin = _draw(n, seq, e, params)
            c_t, a_t = _outcome(truth, sols, coin)
            flipped = list(sols)
            flipped[m] = -sols[m]
            c_f, a_f = _outcome(truth, flipped, coin)
            code = (c_t.astype(np.int64) * 8 + c_f.astype(np.int64) * 4
                    + a_t.astype(np.int64) * 2 + a_f.astype(np.int64))
            return np.bincount(code, minlength=16)

        counts = _run(cfg, job)
        diff = np.empty(16)
        for k in range(16):
            ct, cf, at, af = (k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1
            st = _realized_share(mech, e, params, bool(at))[m]
            sf = _realized_share(mech, e, params, bool(af))[m]
            # contribution and effort cost cancel in the difference
            diff[k] = params.valuation(m) * (ct - cf) + (st - sf) * d.pool
        g, s = _mean_se(diff, counts)
        gaps.append(g)
        ses.append(s)
    return TruthfulnessGap(tuple(gaps), tuple(ses), cfg.samples, cfg.seed)
