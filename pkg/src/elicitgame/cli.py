"""Command-line interface.

Subcommands: solve, sweep, compare, series, simulate, verify, rerun.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 no pure equilibrium.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    NO_PURE_LABEL,
    compare,
    ea_closed_form_label,
    is_unimodal,
    series,
    sweep,
)
from .accuracy import team_accuracy
from .core import (
    EFFORT_PROFILES,
    ContributionProfile,
    EffortProfile,
    Mechanism,
    MechanismKind,
    Params,
    contribution_profiles,
    validate,
)
from .game import SELECTION_RULES, NoPureEquilibrium, solve_spe
from .mechanisms import check_budget_balance, shares_oa
from .montecarlo import GENERATOR, Reporting, SimConfig, simulate, truthfulness_gap

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NO_PURE = 0, 1, 2, 3
CONFIG_ENV = "ELICITGAME_CONFIG"

DEFAULTS = {"a": 0.8, "c": 0.18, "D": 0.15, "v_high": 2.0, "v_low": 1.0}
CONFIG_KEYS = {
    "a": "a", "c": "c", "d": "D", "D": "D",
    "vh": "v_high", "v_high": "v_high", "vl": "v_low", "v_low": "v_low",
    "mech": "mech", "seed": "seed", "samples": "samples", "sv_zero_rule": "sv_zero_rule",
}
DEFAULT_C_RANGE = "0.005:0.5:100"
DEFAULT_D_RANGE = "0.008:0.8:100"


class UsageError(Exception):
    pass


def read_config(path: str | os.PathLike) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[CONFIG_KEYS[key]] = value
    return out


def parse_range(text: str) -> tuple[float, float, int]:
    """``start:end:count`` with inclusive endpoints."""
    try:
        start, end, count = text.split(":")
        start, end, count = float(start), float(end), int(count)
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected start:end:count") from None
    if count < 2 or not start < end:
        raise UsageError(f"empty range {text!r}")
    return start, end, count


def parse_pair(text: str, name: str) -> tuple[int, int]:
    try:
        h, l = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--{name} expects two comma-separated 0/1 values, got {text!r}") from None
    if h not in (0, 1) or l not in (0, 1):
        raise UsageError(f"--{name} entries must be 0 or 1, got {text!r}")
    return h, l


def _config_values(args) -> dict[str, str]:
    path = args.config or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        return read_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None


def resolve_params(args) -> Params:
    cfg = _config_values(args)
    values = {}
    for key, flag in (("a", "a"), ("c", "c"), ("D", "d"), ("v_high", "vh"), ("v_low", "vl")):
        given = getattr(args, flag, None)
        if given is not None:
            values[key] = given
        elif key in cfg:
            try:
                values[key] = float(cfg[key])
            except ValueError:
                raise UsageError(f"config value for {key} is not a number: {cfg[key]!r}") from None
        else:
            values[key] = DEFAULTS[key]
    try:
        params = Params(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = validate(params)
    if not report.ok:
        raise UsageError("; ".join(report.messages))
    if not report.diverse_valuations:
        print("warning: v_high/v_low is below the diverse-valuation threshold", file=sys.stderr)
    return params


def resolve_mechanism(args, default: str = "sv") -> Mechanism:
    cfg = _config_values(args)
    name = getattr(args, "mech", None) or cfg.get("mech", default)
    rule = getattr(args, "sv_zero_rule", None) or cfg.get("sv_zero_rule", "equal")
    try:
        return Mechanism(MechanismKind(name.lower()), sv_zero_rule=rule)
    except ValueError as exc:
        raise UsageError(f"invalid mechanism: {exc}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(_config_values(args).get("seed", 20240101))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class Outputs:
    """Collects data files and writes them with a manifest."""

    def __init__(self, args, params: Params | None, seed: int | None = None):
        self.args = args
        self.params = params
        self.seed = seed
        self.files: dict[str, str] = {}

    def add(self, name: str, text: str):
        self.files[name] = text

    def write(self) -> Path | None:
        if not self.args.out_dir:
            return None
        out = Path(self.args.out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for name, text in self.files.items():
                (out / name).write_text(text)
            manifest = {
                "command": self.args.command,
                "argv": _strip_out_dir(self.args.argv),
                "params": self.params.as_dict() if self.params else None,
                "seed": self.seed,
                "generator": GENERATOR if self.seed is not None else None,
                "version": __version__,
                "outputs": sorted(self.files),
                "out_dir": str(out),
                "duration_s": round(time.perf_counter() - self.args.started, 6),
            }
            path = out / f"{self.args.name}.manifest.json"
            path.write_text(_dump(manifest))
        except OSError as exc:
            raise OSError(f"cannot write to {exc.filename or out}: {exc.strerror}") from None
        return path


def _strip_out_dir(argv: list[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out-dir":
            skip = True
            continue
        if tok.startswith("--out-dir="):
            continue
        out.append(tok)
    return out


def cmd_solve(args) -> int:
    params = resolve_params(args)
    mech = resolve_mechanism(args)
    try:
        outcome = solve_spe(mech, params, SELECTION_RULES[args.selection], args.tolerance)
    except NoPureEquilibrium as exc:
        print(_dump({"mechanism": mech.name, "c": params.c, "D": params.D, "error": "no-pure-equilibrium",
                     "diagnostic": exc.diagnostic}), end="")
        return EXIT_NO_PURE
    text = _dump(outcome.to_record())
    print(text, end="")
    out = Outputs(args, params)
    out.add(f"{args.name}.json", text)
    out.write()
    return EXIT_OK


def _grid(args, mech: Mechanism, params: Params):
    c0, c1, nc = parse_range(args.c_range)
    d0, d1, nd = parse_range(args.d_range)
    return sweep(mech, params, (c0, c1), (d0, d1), (nc, nd), args.selection, args.tolerance, args.threads)


def cmd_sweep(args) -> int:
    params = resolve_params(args)
    mech = resolve_mechanism(args)
    grid = _grid(args, mech, params)
    out = Outputs(args, params)
    out.add(f"{args.name}.csv", grid.to_csv())
    out.add(f"{args.name}.json", json.dumps(grid.region_map(), sort_keys=True) + "\n")
    out.write()
    for label, count in grid.histogram().items():
        print(f"{count:6d}  {label}")
    return EXIT_OK


def cmd_compare(args) -> int:
    params = resolve_params(args)
    rule = args.sv_zero_rule or "equal"
    grids = {
        m: _grid(args, Mechanism(MechanismKind(m), sv_zero_rule=rule), params)
        for m in ("ea", "oa", "sv")
    }
    report = compare(grids)
    out = Outputs(args, params)
    out.add(f"{args.name}.json", _dump(report.to_dict()))
    out.write()
    for name, count in report.violations.items():
        print(f"{name}: {count} violations")
    return EXIT_OK


def cmd_series(args) -> int:
    params = resolve_params(args)
    mech = resolve_mechanism(args)
    axis_name = "c" if args.axis == "c" else "D"
    if args.fixed is not None:
        fixed = args.fixed
    else:
        fixed = params.D if axis_name == "c" else params.c
    rng = args.range or ("0.005:0.5:100" if axis_name == "c" else "0.005:0.8:160")
    lo, hi, n = parse_range(rng)
    pts = series(mech, params, axis_name, fixed, (lo, hi), n, args.selection)
    lines = [f"mechanism,{axis_name},accuracy,welfare,label"]
    lines += [f"{mech.name},{p.x!r},{p.accuracy!r},{p.welfare!r},{p.label}" for p in pts]
    text = "\n".join(lines) + "\n"
    out = Outputs(args, params)
    out.add(f"{args.name}.csv", text)
    if out.write() is None:
        print(text, end="")
    print(
        f"unimodal accuracy={is_unimodal([p.accuracy for p in pts])} "
        f"welfare={is_unimodal([p.welfare for p in pts])}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = resolve_params(args)
    mech = resolve_mechanism(args)
    e = EffortProfile(*parse_pair(args.e, "e"))
    d = ContributionProfile.from_flags(*parse_pair(args.contrib, "contrib"), params.D)
    seed = _seed(args)
    reporting = tuple(Reporting(r) for r in args.report.split(","))
    if len(reporting) != 2:
        raise UsageError("--report expects two strategies, e.g. truthful,flip")
    cfg = SimConfig(samples=args.samples, seed=seed, params=params, reporting=reporting, threads=args.threads)
    est = simulate(e, d, mech, cfg)
    record = est.to_record()
    record.update({"e_high": e.e_high, "e_low": e.e_low, "d_high": d.d_high, "d_low": d.d_low,
                   "reporting": [r.value for r in reporting], "params": params.as_dict()})
    text = _dump(record)
    print(text, end="")
    out = Outputs(args, params, seed)
    out.add(f"{args.name}.json", text)
    out.write()
    return EXIT_OK


class _Checks:
    def __init__(self):
        self.results: list[tuple[str, bool, str]] = []

    def add(self, name: str, ok: bool, detail: str = ""):
        self.results.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.results)


def cmd_verify(args) -> int:
    params = resolve_params(args)
    seed = _seed(args)
    k_stat, k_truth = 4.0, 3.0
    if args.samples < 10_000:
        print(f"warning: {args.samples} samples give low statistical power; using 4 SE for every check",
              file=sys.stderr)
        k_truth = 4.0
    rule = args.sv_zero_rule or "equal"
    mechs = {m: Mechanism(MechanismKind(m), sv_zero_rule=rule) for m in ("ea", "oa", "sv")}
    cfg = SimConfig(samples=args.samples, seed=seed, params=params, threads=args.threads)
    checks = _Checks()
    zero = ContributionProfile(0.0, 0.0)

    for e in EFFORT_PROFILES:
        est = simulate(e, zero, mechs["ea"], cfg)
        exact = team_accuracy(e, params)
        checks.add(f"team-accuracy e={tuple(e)}", abs(est.team_accuracy - exact) <= k_stat * est.team_accuracy_se
                   + 1e-15, f"mc={est.team_accuracy:.5f} exact={exact:.5f} se={est.team_accuracy_se:.2g}")
    for e in EFFORT_PROFILES:
        est = simulate(e, ContributionProfile(params.D, 0.0), mechs["oa"], cfg)
        exact = shares_oa(e, params).p_high
        ok = all(abs(s - exact) <= k_stat * se + 1e-15 for s, se in zip(est.share, est.share_se))
        checks.add(f"oa-share e={tuple(e)}", ok, f"mc={est.share[0]:.5f},{est.share[1]:.5f} exact={exact:.5f}")

    worst = (np.inf, "")
    truth_ok = True
    for name, mech in mechs.items():
        for e in EFFORT_PROFILES:
            for d in contribution_profiles(params.D):
                gap = truthfulness_gap(mech, e, d, cfg)
                truth_ok &= all(gap.passes(k_truth))
                for g, s in zip(gap.gap, gap.se):
                    z = g / s if s > 0 else (0.0 if g == 0 else np.sign(g) * np.inf)
                    if z < worst[0]:
                        worst = (z, f"{name} e={tuple(e)} d={d.flags}")
    checks.add("truthfulness", truth_ok, f"worst z={worst[0]:.2f} at {worst[1]} (bound -{k_truth:g})")

    bb = True
    for e in EFFORT_PROFILES:
        bb &= check_budget_balance(mechs["ea"], e, params).balanced
        bb &= check_budget_balance(mechs["oa"], e, params).deficit >= 0
        if rule == "equal":
            bb &= check_budget_balance(mechs["sv"], e, params).balanced
    checks.add("budget-balance", bb)

    grids = {name: _grid(args, mech, params) for name, mech in mechs.items()}
    ea_mismatch = sum(cell.label != ea_closed_form_label(cell.params) for cell in grids["ea"].outcomes())
    checks.add("ea-closed-form", ea_mismatch == 0, f"{ea_mismatch} mismatches")
    caps = {"ea": 3, "oa": 4, "sv": 5}
    for name, grid in grids.items():
        hist = grid.histogram()
        checks.add(f"{name}-label-count", len(hist) <= caps[name] and NO_PURE_LABEL not in hist,
                   f"{len(hist)} labels")
    solved = [c for g in grids.values() for c in g.outcomes() if c.label != NO_PURE_LABEL]
    checks.add("effort-ordering", all(c.e_star[0] >= c.e_star[1] for c in solved))
    ir = all(min(c.payoffs) >= -1e-12 for c in solved)
    checks.add("individual-rationality", ir)
    report = compare(grids)
    checks.add("dominance", report.total_violations == 0, json.dumps(report.violations))

    if rule != "equal":
        ref = _grid(args, Mechanism(MechanismKind.SV), params)
        changed = [
            (float(a.params.c), float(a.params.D), a.label, b.label)
            for a, b in zip(ref.outcomes(), grids["sv"].outcomes())
            if a.label != b.label
        ]
        print(f"sv zero rule '{rule}': {len(changed)} cells change label")
        for c, D, before, after in changed[:20]:
            print(f"  c={c:.4f} D={D:.4f}  {before} -> {after}")

    out = Outputs(args, params, seed)
    out.add(f"{args.name}.json", _dump([{"check": n, "ok": ok, "detail": d} for n, ok, d in checks.results]))
    out.write()
    return EXIT_OK if checks.ok else EXIT_FAIL


def cmd_rerun(args) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read manifest {args.manifest}: {exc}") from None
    out_dir = args.out_dir or manifest["out_dir"]
    return main([*manifest["argv"], "--out-dir", out_dir])


def _param_parent(point: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help=f"flat key=value config file (default: ${CONFIG_ENV})")
    p.add_argument("--a", type=float, help="accuracy with effort (default 0.8)")
    p.add_argument("--vh", type=float, help="valuation of member H (default 2)")
    p.add_argument("--vl", type=float, help="valuation of member L (default 1)")
    if point:
        p.add_argument("--c", type=float, help="effort cost")
        p.add_argument("--d", type=float, help="incentive volume D")
    else:
        p.add_argument("--c", dest="c_range", default=DEFAULT_C_RANGE, metavar="START:END:N",
                       help=f"effort cost lattice (default {DEFAULT_C_RANGE})")
        p.add_argument("--d", dest="d_range", default=DEFAULT_D_RANGE, metavar="START:END:N",
                       help=f"incentive volume lattice (default {DEFAULT_D_RANGE})")
    p.add_argument("--sv-zero-rule", choices=("equal", "none"), help="SV allocation when nobody exerts effort")
    p.add_argument("--selection", choices=sorted(SELECTION_RULES), default="welfare")
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-dir", help="write data files and a run manifest here")
    p.add_argument("--name", default="run", help="file name prefix for outputs")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elicitgame", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _param_parent()
    gridded = _param_parent(point=False)
    mech_choices = ("ea", "oa", "sv")

    p = sub.add_parser("solve", parents=[common], help="equilibrium at one parameter point")
    p.add_argument("--mech", choices=mech_choices)
    p.set_defaults(func=cmd_solve)

    for name, func, help_ in (("sweep", cmd_sweep, "region map on a (c, D) grid"),
                              ("compare", cmd_compare, "mechanism dominance on a (c, D) grid")):
        p = sub.add_parser(name, parents=[gridded], help=help_)
        if name == "sweep":
            p.add_argument("--mech", choices=mech_choices)
        p.set_defaults(func=func, out_dir=".")

    p = sub.add_parser("series", parents=[common], help="equilibrium metrics along c or D")
    p.add_argument("--mech", choices=mech_choices)
    p.add_argument("--axis", choices=("c", "d", "D"), required=True)
    p.add_argument("--fixed", type=float, help="value of the other axis (default: --d or --c)")
    p.add_argument("--range", metavar="START:END:N")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate at the report level")
    p.add_argument("--mech", choices=mech_choices)
    p.add_argument("--e", default="1,1", help="effort profile e_H,e_L")
    p.add_argument("--contrib", default="0,0", help="contribution flags d_H,d_L (1 = contributes D)")
    p.add_argument("--report", default="truthful,truthful", help="reporting strategy per member")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[gridded], help="run oracle and property checks")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rerun", help="repeat a command from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_rerun)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    args.started = time.perf_counter()
    try:
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be >= 1")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"elicitgame: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"elicitgame: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
