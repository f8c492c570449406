"""Three-term cancellation on the neighboring-frequency ladder.

Take Q = cos(Kx)/sqrt(pi K) and u = cos((K+1)x)/sqrt(pi (K+1)), both of
unit half-order seminorm.  The single product term Q D^2 u dumps an O(1)
amount of mass at the difference frequency, so its dual-norm ratio grows
like sqrt(K); inside the three-term combination that mass cancels and the
ratio stays flat.  The ladder is written as CSV and SVG next to this
script.
"""

import math
import os

import numpy as np

from halfharmonic import ScalarField, make_grid
from halfharmonic.commutators import estimate_ratios
from halfharmonic.experiments import write_csv, write_plot

grid = make_grid(2048)


def ladder(k):
    return ScalarField(grid, np.cos(k * grid.x) / math.sqrt(math.pi * k))


rows = []
print(" K    rT      rLone   rLone/sqrt(K)")
for k in (8, 16, 32, 64, 128, 256):
    r = estimate_ratios(ladder(k), ladder(k + 1))
    rows.append({"K": k, "rT": r.rT, "rLone": r.rLone})
    print(f"{k:3d}  {r.rT:.4f}  {r.rLone:7.4f}  {r.rLone / math.sqrt(k):.4f}")

growths = [b["rLone"] / a["rLone"] for a, b in zip(rows, rows[1:])]
print("uncompensated growth per frequency doubling:",
      " ".join(f"{g:.3f}" for g in growths), "(sqrt(2) = 1.414)")
print("compensated ratio spread:",
      f"{max(r['rT'] for r in rows) / min(r['rT'] for r in rows):.3f}")

out = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out, exist_ok=True)
write_csv(rows, os.path.join(out, "cancellation_ladder.csv"), ["K", "rT", "rLone"])
write_plot(rows, os.path.join(out, "cancellation_ladder.svg"), "K", "rLone",
           logx=True, logy=True, title="uncompensated term grows like sqrt(K)")
print(f"wrote {out}/cancellation_ladder.csv and .svg")
