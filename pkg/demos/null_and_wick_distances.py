"""Null distance, Wick distance and the null-Wick distance on a lattice.

On flat space the null-Wick distance is exactly sqrt(2) times the null distance; on a
cosh-warped product (in conformal time, so the lattice carries exactly null edges) it
approaches that ratio as the lattice is refined.
Run:  python3 demos/null_and_wick_distances.py
"""

import math

from lorentzkit.lattice import lattice_distance, lattice_for, refine_study
from lorentzkit.scenarios import build

flat = build("minkowski2d", half_width=1.0)
lat = lattice_for(flat, 0.05, 3)
for q in [(0.5, 0.2), (0.2, 0.5), (0.0, 0.6)]:
    row = {k: lattice_distance(lat, (0.0, 0.0), q, k).value for k in ("null", "wick", "nullwick")}
    kind = "causal" if abs(q[1]) <= abs(q[0]) else "spacelike"
    print(f"(0,0)->{q} {kind:9s}: null {row['null']:.4f}  wick {row['wick']:.4f}  "
          f"nullwick/null {row['nullwick'] / row['null']:.6f}")

print("\ncosh-warped product, ratio to sqrt(2) under refinement:")
grw = build("grw-conformal")
for h in (0.04, 0.02, 0.01):
    lat = lattice_for(grw, h, 3)
    dn = lattice_distance(lat, (-0.4, -0.4), (0.4, 0.0), "null").value
    dnw = lattice_distance(lat, (-0.4, -0.4), (0.4, 0.0), "nullwick").value
    print(f"  spacing {h}: |nullwick - sqrt2 null| / null = {abs(dnw - math.sqrt(2) * dn) / dn:.2e}")

print("\nWick distance is non-increasing in the stencil radius:")
for row in refine_study(build("grw"), (0.0, 0.0), (0.6, 0.4), "wick", [0.05], [1, 2, 3]):
    print(f"  R = {row['stencil']}: {row['value']:.6f}")
