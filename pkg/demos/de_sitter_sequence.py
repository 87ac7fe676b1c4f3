"""Time-shifted de Sitter slabs: the raw sequence blows up, the translated one is constant.

Member i is -dt^2 + cosh^2(t + i) dx^2 on [-1, 1] x S^1. Comparing members in the same chart
gives C^0 differences cosh^2(1 + i) - cosh^2(1); pulling back by t -> t - i makes every member
identical to the limit, and the Wick metric is the hyperbolic plane for every i.
Run:  python3 demos/de_sitter_sequence.py
"""

import math

from lorentzkit.chart import Box, riemann_norm
from lorentzkit.convergence import check_convergence
from lorentzkit.families import de_sitter_family
from lorentzkit.scenarios import build

limit = build("de-sitter", i=0)
box = Box((-1.0, 0.0), (1.0, 2 * math.pi))

raw = check_convergence(de_sitter_family(5, diffeo=False), limit.g, [box], 0, [1.0])
pulled = check_convergence(de_sitter_family(5), limit.g, [box], 2, [1e-10], limit_tau=limit.tau)
print(" i   raw C^0 norm      closed form      pulled-back C^2   Wick lambda")
for r, s in zip(raw.rows, pulled.rows):
    i = r["index"]
    print(f"{i:2d}  {r['norm']:14.6f}  {math.cosh(1 + i) ** 2 - math.cosh(1) ** 2:14.6f}  "
          f"{s['norm']:16.3e}  {s['lambda']:.12f}")
print("verdicts:", raw.summary["boxes"][0]["verdict"], "/", pulled.summary["boxes"][0]["verdict"])

pts = Box((-1.0, 0.5), (1.0, 5.0)).grid(3)
for m in de_sitter_family(3):
    W = m.pulled_back_wick()
    print(f"|Rm| of the pulled-back Wick metric: {riemann_norm(W, W, pts).max():.10f}")
