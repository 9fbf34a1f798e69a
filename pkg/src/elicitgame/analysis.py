"""Parameter sweeps, region maps, mechanism comparison and boundary search."""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    ContributionProfile,
    EffortProfile,
    Mechanism,
    MechanismKind,
    Params,
    as_mechanism,
)
from .game import (
    DEFAULT_TOL,
    NoPureEquilibrium,
    region_label,
    solve_spe,
)

NO_PURE_LABEL = "no-pure-NE"
COMPARE_TOL = 1e-9


@dataclass(frozen=True)
class FailedCell:
    """Grid cell whose game has no pure equilibrium."""

    mechanism: str
    params: Params
    diagnostic: str
    label: str = NO_PURE_LABEL
    team_accuracy: float = float("nan")
    welfare: float = float("nan")
    multiplicity: int = 0

    def to_record(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "c": self.params.c,
            "D": self.params.D,
            "label": self.label,
            "accuracy": self.team_accuracy,
            "welfare": self.welfare,
            "diagnostic": self.diagnostic,
        }


def solve_cell(mech, params: Params, selection="welfare", tolerance: float = DEFAULT_TOL):
    """Like :func:`solve_spe` but turns a missing equilibrium into a :class:`FailedCell`."""
    try:
        return solve_spe(mech, params, selection, tolerance)
    except NoPureEquilibrium as exc:
        return FailedCell(as_mechanism(mech).name, params, exc.diagnostic)


def axis(start: float, stop: float, count: int) -> np.ndarray:
    """Inclusive lattice ``start..stop`` with ``count`` points."""
    if count < 2:
        raise ValueError("an axis needs at least 2 points")
    if not start < stop:
        raise ValueError(f"empty range {start}:{stop}")
    return np.linspace(start, stop, count)


def _solve_row(args):
    mech, params, c, d_axis, selection, tolerance = args
    return [solve_cell(mech, params.with_(c=float(c), D=float(D)), selection, tolerance) for D in d_axis]


@dataclass
class SweepGrid:
    """Equilibria on a ``(c, D)`` lattice; ``cells[i][j]`` sits at ``(c_axis[i], d_axis[j])``."""

    mechanism: str
    params: Params
    c_axis: np.ndarray
    d_axis: np.ndarray
    cells: list[list]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.c_axis), len(self.d_axis)

    def _field(self, name, dtype=float) -> np.ndarray:
        return np.array([[getattr(cell, name) for cell in row] for row in self.cells], dtype=dtype)

    def labels(self) -> np.ndarray:
        return self._field("label", dtype=object)

    def accuracy(self) -> np.ndarray:
        return self._field("team_accuracy")

    def welfare(self) -> np.ndarray:
        return self._field("welfare")

    def multiplicity(self) -> np.ndarray:
        return self._field("multiplicity", dtype=int)

    def outcomes(self):
        for row in self.cells:
            yield from row

    def histogram(self) -> dict[str, int]:
        return dict(sorted(Counter(cell.label for cell in self.outcomes()).items()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["mechanism", "c", "D", "label", "accuracy", "welfare", "u_high", "u_low"])
        for cell in self.outcomes():
            if isinstance(cell, FailedCell):
                u = ("", "")
            else:
                u = (repr(cell.payoffs.u_high), repr(cell.payoffs.u_low))
            writer.writerow(
                [self.mechanism, repr(cell.params.c), repr(cell.params.D), cell.label,
                 repr(cell.team_accuracy), repr(cell.welfare), *u]
            )
        return buf.getvalue()

    def region_map(self) -> dict:
        """JSON-ready document: axes, label legend and an integer label matrix."""
        legend = sorted(self.histogram())
        index = {lab: k for k, lab in enumerate(legend)}
        labels = self.labels()
        return {
            "mechanism": self.mechanism,
            "params": self.params.as_dict(),
            "c_axis": [float(x) for x in self.c_axis],
            "d_axis": [float(x) for x in self.d_axis],
            "legend": legend,
            # rows follow c_axis, columns follow d_axis
            "labels": [[index[lab] for lab in row] for row in labels],
            "label_names": labels.tolist(),
        }


def sweep(
    mech: Mechanism | MechanismKind | str,
    params: Params,
    c_range: tuple[float, float],
    d_range: tuple[float, float],
    resolution: int | tuple[int, int],
    selection: str = "welfare",
    tolerance: float = DEFAULT_TOL,
    threads: int = 1,
) -> SweepGrid:
    """Solve the game at every lattice point of ``c_range x d_range``.

    ``resolution`` is a point count per axis (or a pair). Rows are computed
    in parallel worker processes when ``threads > 1``; results are merged in
    row order so the grid does not depend on the worker count.
    """
    mech = as_mechanism(mech)
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    c_axis = axis(c_range[0], c_range[1], resolution[0])
    d_axis = axis(d_range[0], d_range[1], resolution[1])
    jobs = [(mech, params, c, d_axis, selection, tolerance) for c in c_axis]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(_solve_row, jobs))
    else:
        cells = [_solve_row(job) for job in jobs]
    return SweepGrid(mech.name, params, c_axis, d_axis, cells)


def ea_closed_form(params: Params, tol: float = DEFAULT_TOL) -> tuple[ContributionProfile, EffortProfile]:
    """Closed-form EA equilibrium: nobody contributes, effort set by two cost thresholds."""
    c_low = (2 * params.a - 1) / 4 * params.v_low
    c_high = (2 * params.a - 1) / 4 * params.v_high
    d = ContributionProfile(0.0, 0.0)
    if params.c <= c_low + tol:
        return d, EffortProfile(1, 1)
    if params.c <= c_high + tol:
        return d, EffortProfile(1, 0)
    return d, EffortProfile(0, 0)


def ea_closed_form_label(params: Params) -> str:
    return region_label(*ea_closed_form(params))


@dataclass
class DominanceReport:
    """Cellwise check of ``SV >= OA >= EA`` in accuracy and welfare."""

    c_axis: np.ndarray
    d_axis: np.ndarray
    accuracy: dict[str, np.ndarray]
    welfare: dict[str, np.ndarray]
    violations: dict[str, int]
    violation_cells: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    def to_dict(self) -> dict:
        return {
            "c_axis": [float(x) for x in self.c_axis],
            "d_axis": [float(x) for x in self.d_axis],
            "violations": dict(self.violations),
            "total_violations": self.total_violations,
            "violation_cells": {k: [list(p) for p in v] for k, v in self.violation_cells.items()},
            "strict_sv_gain_cells": int(
                np.sum((self.accuracy["sv"] > self.accuracy["oa"] + COMPARE_TOL)
                       | (self.welfare["sv"] > self.welfare["oa"] + COMPARE_TOL))
            ),
        }


def compare(grids: dict[str, SweepGrid] | Sequence[SweepGrid], tol: float = COMPARE_TOL) -> DominanceReport:
    """Count cells violating each of the four dominance inequalities.

    ``grids`` must hold one grid per mechanism (``ea``, ``oa``, ``sv``) on
    identical axes and base parameters. Cells without a pure equilibrium
    compare as NaN and therefore count as violations.
    """
    if not isinstance(grids, dict):
        grids = {g.mechanism: g for g in grids}
    missing = {"ea", "oa", "sv"} - set(grids)
    if missing:
        raise ValueError(f"missing grids for {sorted(missing)}")
    ref = grids["ea"]
    for g in grids.values():
        if not (np.array_equal(g.c_axis, ref.c_axis) and np.array_equal(g.d_axis, ref.d_axis)):
            raise ValueError("grids do not share axes")
        if g.params.with_(c=0, D=0) != ref.params.with_(c=0, D=0):
            raise ValueError("grids do not share base parameters")
    acc = {k: grids[k].accuracy() for k in ("ea", "oa", "sv")}
    wel = {k: grids[k].welfare() for k in ("ea", "oa", "sv")}
    checks = {
        "accuracy_sv_ge_oa": (acc["sv"], acc["oa"]),
        "accuracy_oa_ge_ea": (acc["oa"], acc["ea"]),
        "welfare_sv_ge_oa": (wel["sv"], wel["oa"]),
        "welfare_oa_ge_ea": (wel["oa"], wel["ea"]),
    }
    violations, where = {}, {}
    for name, (hi, lo) in checks.items():
        bad = ~(hi >= lo - tol)
        violations[name] = int(bad.sum())
        where[name] = [(float(ref.c_axis[i]), float(ref.d_axis[j])) for i, j in zip(*np.nonzero(bad))]
    return DominanceReport(ref.c_axis, ref.d_axis, acc, wel, violations, where)


class SeriesPoint(NamedTuple):
    x: float
    accuracy: float
    welfare: float
    label: str


def series(
    mech: Mechanism | MechanismKind | str,
    params: Params,
    sweep_axis: str,
    fixed_value: float,
    value_range: tuple[float, float],
    resolution: int,
    selection: str = "welfare",
) -> list[SeriesPoint]:
    """Equilibrium accuracy and welfare along ``c`` (with D fixed) or ``D`` (with c fixed)."""
    if sweep_axis not in ("c", "D", "d"):
        raise ValueError(f"sweep axis must be 'c' or 'D', got {sweep_axis!r}")
    out = []
    for x in axis(value_range[0], value_range[1], resolution):
        x = float(x)
        p = params.with_(c=x, D=fixed_value) if sweep_axis == "c" else params.with_(c=fixed_value, D=x)
        cell = solve_cell(mech, p, selection)
        out.append(SeriesPoint(x, cell.team_accuracy, cell.welfare, cell.label))
    return out


def is_unimodal(values: Sequence[float], tol: float = COMPARE_TOL) -> bool:
    """Non-decreasing then non-increasing, with at least one real rise and one real fall."""
    v = np.asarray(values, dtype=float)
    steps = np.diff(v)
    ups = np.nonzero(steps > tol)[0]
    downs = np.nonzero(steps < -tol)[0]
    if len(ups) == 0 or len(downs) == 0:
        return False
    return bool(ups.max() < downs.min())


class BoundaryEstimate(NamedTuple):
    """Contribution region along D at fixed c.

    ``d_low_hat``/``d_high_hat`` bracket the region when it is one interval;
    a region reaching D -> 0 reports 0 and one reaching the scan top reports d_max. ``scan`` holds the
    raw ``(D, label)`` pairs when labels were not monotone.
    """

    c: float
    present: bool
    d_low_hat: float | None = None
    d_high_hat: float | None = None
    label: str | None = None
    monotone: bool = True
    scan: tuple = ()


def _contributes(cell) -> bool:
    return not isinstance(cell, FailedCell) and cell.d_star.pool > 0


def find_boundaries(
    mech: Mechanism | MechanismKind | str,
    params: Params,
    c: float,
    d_max: float,
    tol: float = 1e-4,
    scan_points: int = 400,
    selection: str = "welfare",
) -> BoundaryEstimate:
    """Locate where a contribution equilibrium starts and stops along D.

    A coarse scan over ``(0, d_max]`` finds the contributing cells; each edge
    of a single contiguous run is then bisected to width ``tol``. If the
    contributing cells form several runs, the scan itself is returned.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mech = as_mechanism(mech)
    base = params.with_(c=c)

    def at(D):
        return solve_cell(mech, base.with_(D=float(D)), selection)

    grid = np.linspace(d_max / scan_points, d_max, scan_points)
    cells = [at(D) for D in grid]
    flags = np.array([_contributes(cell) for cell in cells])
    if not flags.any():
        return BoundaryEstimate(c, False)
    idx = np.nonzero(flags)[0]
    first, last = int(idx[0]), int(idx[-1])
    labels = {cells[k].label for k in idx}
    if last - first + 1 != len(idx) or len(labels) > 1:
        scan = tuple((float(D), cell.label) for D, cell in zip(grid, cells))
        return BoundaryEstimate(c, True, None, None, None, False, scan)

    def bisect(lo, hi, inside_hi):
        # inside_hi: True if hi is in the region and lo is not
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _contributes(at(mid)) == inside_hi:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    d_low = 0.0 if first == 0 else bisect(float(grid[first - 1]), float(grid[first]), True)
    if last == len(grid) - 1:
        d_high = float(d_max)
    else:
        d_high = bisect(float(grid[last]), float(grid[last + 1]), False)
    return BoundaryEstimate(c, True, d_low, d_high, labels.pop())
