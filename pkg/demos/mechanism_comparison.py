"""Side-by-side equilibria at a few settings, then a grid-wide dominance count."""

from elicitgame import EA, OA, SV, Params, compare, solve_spe, sweep

p = Params()
points = [(0.10, 0.15), (0.18, 0.40), (0.32, 0.10), (0.45, 0.30)]

for c, D in points:
    q = p.with_(c=c, D=D)
    print(f"c={c:.2f} D={D:.2f}")
    for mech in (EA, OA, SV):
        out = solve_spe(mech, q)
        print(f"  {mech.name:3s} {out.label:20s} P_T={out.team_accuracy:.3f} W={out.welfare:.4f}")

grids = {m.name: sweep(m, p, (0.005, 0.5), (0.008, 0.8), 60) for m in (EA, OA, SV)}
report = compare(grids)
print("\nviolations of SV >= OA >= EA on a 60x60 grid:", report.violations)
print("cells where SV is strictly more accurate than OA:", report.to_dict()["strict_sv_gain_cells"])
