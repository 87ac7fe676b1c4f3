"""Steepness versus h-steepness, and the Wick rotation of a canonical representative.

On flat space tau = phi(t) with phi' = 1/k^2 near t = k^2 has lapse k^4, so it is not steep
for any fixed constant, but it is h-steep for h = phi'^2 delta / 2. Separately, for any
temporal function, h = g_W / 2 makes the steepness inequality tight exactly on null vectors.
Run:  python3 demos/steepness_and_wick_rotation.py
"""

import numpy as np

from lorentzkit.chart import MetricField
from lorentzkit.scenarios import appendixB_band, build
from lorentzkit.temporal import canonical_field, is_h_steep, lapse, steepness_sweep, wick_matrix

scen = build("appendixB")
h = scen.h_field("phi")
print(" k   lapse at (k^2, 0)   inf -g(grad,grad) on band   h-steep margin")
for k in range(1, 6):
    p = np.array([k * k, 0.0])
    sweep = steepness_sweep(scen.g, scen.tau, appendixB_band(k), 1.0, n=21)
    rep = is_h_steep(scen.g, scen.tau, h, p)
    print(f"{k:2d}   {float(lapse(scen.g, scen.tau, p)):17.6f}   {sweep['inf']:25.6f}   {rep.margin:+.2e} ({rep.status})")

grw = build("grw")
can = canonical_field(grw.g, grw.tau)
print("\ncosh-warped product, h = g_W / 2 of the canonical representative:")
for p in ([0.0, 0.0], [0.7, -0.3]):
    p = np.array(p)
    H = 0.5 * wick_matrix(can(p), grw.tau.d1(p))
    rep = is_h_steep(can, grw.tau, MetricField(lambda x, H=H: H, 2, signature="riemannian"), p)
    print(f"  at {p}: margin {rep.margin:+.2e} ({rep.status}), witness direction {rep.witness / np.abs(rep.witness).max()}")
