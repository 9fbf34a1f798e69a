"""Does anyone gain by always flipping their report?

Paired simulation: both runs share every draw, so the gap estimate has
small variance. A positive gap means truthful reporting pays more.
"""

from elicitgame import EA, EFFORT_PROFILES, OA, SV, ContributionProfile, Params, SimConfig, truthfulness_gap

p = Params(D=0.4)
cfg = SimConfig(samples=200_000, seed=7, params=p)
d = ContributionProfile(0.4, 0.0)

print("mech effort   gap_H (se)          gap_L (se)")
for mech in (EA, OA, SV):
    for e in EFFORT_PROFILES:
        g = truthfulness_gap(mech, e, d, cfg)
        print(f"{mech.name:4s} {tuple(e)}  {g.gap[0]:+.4f} ({g.se[0]:.4f})  {g.gap[1]:+.4f} ({g.se[1]:.4f})"
              f"  {'ok' if all(g.passes()) else 'VIOLATION'}")
