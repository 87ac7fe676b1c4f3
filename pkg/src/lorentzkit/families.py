"""Ready-made metric sequences built from the scenario catalogue."""

from __future__ import annotations

import math

import numpy as np

from .chart import MetricField, minkowski, warped_product
from .convergence import Diffeo, Member, MetricSequence, canonicalize
from .geodesic import Frame
from .scenarios import ScenarioError, boost_map, build_boost_bump, build_de_sitter, warp_functions
from .temporal import coordinate_time

NULL_FLAT = np.array([[0.0, -1.0], [-1.0, 0.0]])  # -2 du dv
T_NULL = np.array([1.0, 1.0]) / math.sqrt(2.0)  # d/dt in (u, v)
X_NULL = np.array([1.0, -1.0]) / math.sqrt(2.0)  # d/dx in (u, v)


def flat_null_metric() -> MetricField:
    def g(x):
        return np.broadcast_to(NULL_FLAT, x.shape[:-1] + (2, 2)).copy()

    return MetricField(g, 2, lambda x: np.zeros(x.shape[:-1] + (2, 2, 2)),
                       lambda x: np.zeros(x.shape[:-1] + (2, 2, 2, 2)), name="flat(u,v)")


def null_time():
    """``t = (u + v) / sqrt 2`` on the null chart."""
    from .temporal import TemporalField

    w = T_NULL.copy()
    return TemporalField(lambda x: x @ w, 2, lambda x: np.broadcast_to(w, x.shape).copy(),
                         lambda x: np.zeros(x.shape + (2,)), lambda x: np.zeros(x.shape + (2, 2)), name="t")


def de_sitter_family(count: int, diffeo: bool = True, n: int = 2, start: int = 1) -> MetricSequence:
    members = []
    for i in range(start, start + count):
        sc = build_de_sitter(i=i, n=n)
        shift = np.zeros(n)
        shift[0] = -i
        phi = Diffeo.translation(shift, name=f"F{i}") if diffeo else Diffeo.identity(n)
        base = phi(np.zeros(n))
        members.append(Member(sc.g, phi, base, sc.tau, Frame.orthonormal(sc.g, base), wick=sc.wick))
    return MetricSequence(members, name="de-sitter" + ("" if diffeo else "-raw"), start=start)


def constant_family(count: int, dim: int = 2, start: int = 1) -> MetricSequence:
    g = minkowski(dim)
    members = [Member(g, Diffeo.identity(dim), np.zeros(dim), coordinate_time(dim),
                      Frame.orthonormal(g, np.zeros(dim))) for _ in range(count)]
    return MetricSequence(members, name="constant", start=start)


def scaled_time_family(count: int, start: int = 1) -> MetricSequence:
    """Flat space with ``tau_i = (1 + 1/i) t``, canonicalized."""
    g = minkowski(2)
    members = []
    for i in range(start, start + count):
        tau = coordinate_time(2, scale=1.0 + 1.0 / i)
        members.append(canonicalize(Member(g, Diffeo.identity(2), np.zeros(2), tau)))
    return MetricSequence(members, name="scaled-time", start=start)


def boost_bump_family(count: int, start: int = 1, **bump) -> MetricSequence:
    members = []
    for k in range(start, start + count):
        sc = build_boost_bump(k, **bump)
        anchor = Frame(np.zeros(2), np.stack([T_NULL, X_NULL], axis=1), 1)
        members.append(Member(sc.g, Diffeo.identity(2), np.zeros(2), sc.tau, anchor))
    return MetricSequence(members, name="boost-bump", start=start)


def boost_iterate_family(count: int, start: int = 1) -> MetricSequence:
    """Flat null plane embedded by ``phi^k``, each member anchored at ``d/dt``."""
    g = flat_null_metric()
    members = []
    for k in range(start, start + count):
        fwd, inv, J = boost_map(k)
        phi = Diffeo(fwd, inv, linear=J, name=f"boost^{k}")
        anchor = Frame(np.zeros(2), np.stack([T_NULL, X_NULL], axis=1), 1)
        members.append(Member(g, phi, np.zeros(2), null_time(), anchor))
    return MetricSequence(members, name="boost-iterates", start=start)


def warp_wick_metrics(count: int, start: int = 1):
    """Riemannian ``dt^2 + cosh^2(i t) dx^2`` for ``i = start, ...``: curvature ``-i^2``."""
    out = []
    for i in range(start, start + count):
        f, df, d2f, _ = warp_functions("cosh", float(i))
        out.append(warped_product(f, df, d2f, sign=1.0, name=f"warp-wick(i={i})"))
    return out


FAMILIES = {
    "de-sitter": de_sitter_family,
    "constant": constant_family,
    "scaled-time": scaled_time_family,
    "boost-bump": boost_bump_family,
    "boost-iterates": boost_iterate_family,
}


def family(name: str, count: int, **kw) -> MetricSequence:
    if name not in FAMILIES:
        raise ScenarioError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    return FAMILIES[name](count, **kw)
