"""Causal character of vectors and causal reachability (exact 2D diagonal oracle, lattice closure)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .chart import ChartError, MetricField

NULL_TOL = 1e-9


class Kind(str, enum.Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"


class Orientation(str, enum.Enum):
    FUTURE = "future"
    PAST = "past"
    NONE = "none"


@dataclass(frozen=True)
class CausalChar:
    kind: Kind
    orientation: Orientation
    degenerate: bool = False  # zero vector

    @property
    def causal(self) -> bool:
        return self.kind != Kind.SPACELIKE

    def __str__(self):
        return f"{self.kind.value} {self.orientation.value}"


def causal_character(g: MetricField, p, v, T=None, null_tol: float = NULL_TOL) -> CausalChar:
    """Classify ``v`` at ``p``; ``T`` is the time orientation (vector or callable, default ``d/dx^0``)."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    G = g(p)
    if T is None:
        Tp = np.zeros(g.dim)
        Tp[0] = 1.0
    else:
        Tp = np.asarray(T(p) if callable(T) else T, dtype=float)
    if not Tp @ G @ Tp < 0:
        raise ChartError("time orientation field must be timelike")
    ref = float(v @ v)
    if ref == 0.0:
        return CausalChar(Kind.SPACELIKE, Orientation.NONE, degenerate=True)
    q = float(v @ G @ v)
    if abs(q) <= null_tol * ref:
        kind = Kind.NULL
    elif q < 0:
        kind = Kind.TIMELIKE
    else:
        return CausalChar(Kind.SPACELIKE, Orientation.NONE)
    orient = Orientation.FUTURE if v @ G @ Tp < 0 else Orientation.PAST
    return CausalChar(kind, orient)


@dataclass
class ReachRegion:
    """Causal future of ``p`` inside a strip: ``x_minus(t) <= x <= x_plus(t)`` for ``t0 <= t <= t_max``."""

    origin: np.ndarray
    t: np.ndarray
    x_minus: np.ndarray
    x_plus: np.ndarray
    tol: float

    def bounds_at(self, t: float):
        return (float(np.interp(t, self.t, self.x_minus)), float(np.interp(t, self.t, self.x_plus)))

    def contains(self, q, pad: float = 0.0) -> bool:
        q = np.asarray(q, dtype=float)
        if q[0] < self.t[0] - pad or q[0] > self.t[-1] + pad:
            return False
        lo, hi = self.bounds_at(min(max(q[0], self.t[0]), self.t[-1]))
        return bool(lo - pad <= q[1] <= hi + pad)

    def margin(self, q) -> float:
        """Signed horizontal distance from ``q`` to the region boundary (positive inside)."""
        lo, hi = self.bounds_at(float(q[0]))
        return float(min(q[1] - lo, hi - q[1]))


def reach_2d_diagonal(f: Callable, p, t_max: float, rtol: float = 1e-10, atol: float = 1e-12,
                      samples: int = 2001, max_step: Optional[float] = None) -> ReachRegion:
    """Extreme null curves ``x' = +-1/f(t, x)`` from ``p`` for ``-dt^2 + f^2 dx^2``.

    ``f`` is the warp ``f(t, x) > 0``. ``max_step`` keeps the integrator from
    stepping over thin features of ``f``.
    """
    p = np.asarray(p, dtype=float)
    if t_max <= p[0]:
        raise ValueError("t_max must exceed the starting time")
    ts = np.linspace(p[0], t_max, samples)
    max_step = max_step if max_step is not None else (t_max - p[0]) / 400

    def rhs(sign):
        def fun(t, y):
            fv = float(f(t, y[0]))
            if not fv > 0:
                raise ChartError(f"warp must stay positive, got {fv} at {(t, y[0])}")
            return [sign / fv]

        return fun

    curves = []
    for sign in (-1.0, 1.0):
        sol = solve_ivp(rhs(sign), (p[0], t_max), [p[1]], method="RK45", t_eval=ts, rtol=rtol,
                        atol=atol, max_step=max_step)
        if not sol.success:
            raise ChartError(f"reach boundary integration failed: {sol.message}")
        curves.append(sol.y[0])
    return ReachRegion(origin=p, t=ts, x_minus=curves[0], x_plus=curves[1], tol=rtol)
