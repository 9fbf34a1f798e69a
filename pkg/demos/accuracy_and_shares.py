"""How effort moves the team answer and what each mechanism pays out.

Run: python demos/accuracy_and_shares.py
"""

from elicitgame import EA, EFFORT_PROFILES, OA, SV, Params, shares, team_accuracy

p = Params()
print(f"a={p.a}  V_H={p.v_high}  V_L={p.v_low}\n")
print("effort   P_T     EA          OA          SV")
for e in EFFORT_PROFILES:
    row = [f"{tuple(e)}  {team_accuracy(e, p):.3f}"]
    for mech in (EA, OA, SV):
        s = shares(mech, e, p)
        row.append(f"({s.p_high:.2f},{s.p_low:.2f})")
    print("  ".join(row))

# OA leaves money on the table unless both work perfectly
print("\nOA payout when both exert effort, by accuracy a:")
for a in (0.6, 0.8, 0.95, 1.0):
    print(f"  a={a:<5} total share {shares(OA, (1, 1), Params(a=a)).total:.4f}")
