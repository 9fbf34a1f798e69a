"""Accuracy and welfare along one axis with the other held fixed."""

from elicitgame import EA, OA, SV, Params, find_boundaries, series
from elicitgame.analysis import is_unimodal

p = Params()

for mech in (EA, OA, SV):
    pts = series(mech, p, "D", 0.18, (0.005, 0.8), 80)
    w = [pt.welfare for pt in pts]
    peak = max(pts, key=lambda pt: pt.welfare)
    print(f"{mech.name}: welfare over D at c=0.18, peak {peak.welfare:.4f} at D={peak.x:.3f}, "
          f"unimodal={is_unimodal(w)}")

print()
for mech in (OA, SV):
    est = find_boundaries(mech, p, 0.18, 0.8)
    print(f"{mech.name}: a member contributes for D in [{est.d_low_hat:.4f}, {est.d_high_hat:.4f}]  ({est.label})")

print("\nEA accuracy as effort cost rises (D=0.15):")
for pt in series(EA, p, "c", 0.15, (0.05, 0.45), 9):
    print(f"  c={pt.x:.3f}  P_T={pt.accuracy:.3f}  {pt.label}")
