"""Boosting a bump out of every compact set.

Member k is flat -2 du dv plus a bump pushed forward by the boost (u, v) -> (2^k u, 2^-k v).
From k = 3 on the bump has left the box |u|, |v| <= 4, so the members converge to flat space
there, but in the frame of an observer riding with the bump nothing changes; and the boosted
frames at the origin drift off, so anchored convergence fails.
Run:  python3 demos/boost_iterates.py
"""

import math

import numpy as np

from lorentzkit.chart import Box
from lorentzkit.convergence import anchored_convergence, quasi_isometry_factor
from lorentzkit.families import T_NULL, X_NULL, boost_iterate_family, flat_null_metric
from lorentzkit.geodesic import Frame
from lorentzkit.scenarios import build_boost_bump
from lorentzkit.temporal import observer_wick

flat = flat_null_metric()
pts = Box((-4.0, -4.0), (4.0, 4.0)).grid(41)
print(" k   max|g_k - flat| on box   lambda near the bump   bump starts at u =")
for k in range(0, 7):
    sc = build_boost_bump(k)
    a = 2.0**k
    T = np.array([a, 1 / a]) / math.sqrt(2)
    field = lambda x, T=T: np.broadcast_to(T, x.shape)  # noqa: E731
    lam = quasi_isometry_factor(observer_wick(flat, field), observer_wick(sc.g, field),
                                Box((a, -0.5 / a), (2 * a, 0.5 / a)))
    off = np.max(np.abs(sc.g(pts) - flat(pts)))
    print(f"{k:2d}   {off:22.3e}   {lam:20.6f}   {sc.extra['support_u_min']:.1f}")

anchor = Frame(np.zeros(2), np.stack([T_NULL, X_NULL], axis=1), 1)
resid, angles = anchored_convergence(boost_iterate_family(6), flat, anchor)
print("\nanchor residuals of pure boosts:", ", ".join(f"{r:.2f}" for r in resid))
