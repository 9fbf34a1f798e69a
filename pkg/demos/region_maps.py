"""ASCII equilibrium maps over the (c, D) plane for each mechanism.

Rows are effort cost c (top = cheap), columns are pool volume D.
Run: python demos/region_maps.py [resolution]
"""

import string
import sys

from elicitgame import EA, OA, SV, Params, sweep

n = int(sys.argv[1]) if len(sys.argv) > 1 else 30
p = Params()
grids = {m.name: sweep(m, p, (0.005, 0.5), (0.008, 0.8), n) for m in (EA, OA, SV)}

names = sorted({lab for g in grids.values() for lab in g.histogram()})
glyph = dict(zip(names, string.ascii_uppercase))

for key, g in grids.items():
    print(f"\n{key.upper()}  (c down, D across)")
    for c, row in zip(g.c_axis, g.labels()):
        print(f"{c:5.3f} " + "".join(glyph[lab] for lab in row))

print("\nlegend")
for lab, ch in glyph.items():
    print(f"  {ch}  {lab}")
