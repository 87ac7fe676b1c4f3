"""A diagonal metric -dt^2 + f^2 dx^2 whose warp f drops to 1e-3 on a thin strip near t = 0.

The lattice Wick distance from (0, 0) to (1, 1.2) comes out well below sqrt(2) * (tau(q) - tau(p)),
yet q is not in the causal future of p: the Wick distance alone cannot certify causality.
Run:  python3 demos/slow_strip_counterexample.py
"""

import math

from lorentzkit.causal import reach_2d_diagonal
from lorentzkit.lattice import lattice_distance, lattice_for, lattice_reach
from lorentzkit.scenarios import appendixD_alpha, appendixD_f, build

p, q = (0.0, 0.0), (1.0, 1.2)
scen = build("appendixD")

lat = lattice_for(scen, 0.01, 3, quadrature="simpson", strict=True)
print(f"lattice: {lat.num_nodes} nodes, {lat.num_edges} edges")

d = lattice_distance(lat, p, q, "wick")
print(f"Wick distance d_W(p, q)      = {d.value:.5f}")
print(f"sqrt(2) * delta tau          = {math.sqrt(2) * (d.tau_q - d.tau_p):.5f}")

# where does the cheap path go? it dives into the slow strip and comes back
slow = sum(1 for t, x in d.path if abs(t) <= 0.06 + 1e-9 and 0.2 <= x <= 1.25)
print(f"path nodes inside the strip  = {slow} of {d.path_len_nodes}")

region = reach_2d_diagonal(lambda t, x: appendixD_f(t, x), p, 1.0, max_step=0.002)
lo, hi = region.bounds_at(1.0)
print(f"causal future at t = 1       : {lo:.4f} <= x <= {hi:.4f}")
print(f"q in J+(p)? exact: {region.contains(q)}, lattice: {lat.node(q) in set(lattice_reach(lat, p).tolist())}")

vertices, length, pieces = appendixD_alpha()
print("explicit piecewise-causal curve alpha:")
for a, b, L in zip(vertices[:-1], vertices[1:], pieces):
    print(f"  ({a[0]:.4f}, {a[1]:.2f}) -> ({b[0]:.4f}, {b[1]:.2f})  L_W = {L:.5f}")
print(f"  total L_W(alpha) = {length:.5f}")
