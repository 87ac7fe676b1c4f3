"""Built-in spacetimes with analytic jets and a plain-text scenario config format.

Every scenario is presented in product form ``R x Sigma`` with the temporal
function as the first coordinate whenever that is possible.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import expit

from .chart import (
    Box,
    ChartError,
    MetricField,
    circle,
    euclidean,
    minkowski,
    round_sphere,
    warped_over,
    warped_product,
)
from .temporal import TemporalField, coordinate_time, gradient_norm, wick_metric

APPENDIX_D_P = (0.0, 0.0)
APPENDIX_D_Q = (1.0, 1.2)
APPENDIX_D_BOUND = 0.2 * math.sqrt(2) + math.sqrt(2) / math.sqrt(1000) + 1


class ScenarioError(ChartError):
    pass


@dataclass
class Scenario:
    name: str
    g: MetricField
    tau: TemporalField
    box: Box
    wick: Optional[MetricField] = None
    h: Dict[str, Callable[[], MetricField]] = field(default_factory=dict)
    wick_complete: str = "unknown"  # "yes", "no" or "unknown"
    citation: str = ""
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.g.dim

    @property
    def periodic(self):
        return self.g.periodic

    def wick_field(self) -> MetricField:
        return self.wick if self.wick is not None else wick_metric(self.g, self.tau)

    def h_field(self, kind: str) -> MetricField:
        """Resolve ``half-euclidean``, ``half-wick`` or a named scenario field."""
        if kind == "half-euclidean":
            return euclidean(self.dim, 0.5)
        if kind == "half-wick":
            W = self.wick_field()
            return MetricField(lambda x: 0.5 * W(x), self.dim, signature="riemannian",
                               periodic=W.periodic, name=f"half-wick({self.name})")
        if kind in self.h:
            return self.h[kind]()
        raise ScenarioError(f"unknown h field {kind!r} for scenario {self.name!r}")

    def validate(self, n: int = 9) -> None:
        """Sampled signature and temporal-gradient checks on the scenario box."""
        pts = self.box.grid(n)
        from .chart import eval_metric

        eval_metric(self.g, pts)
        if np.any(gradient_norm(self.g, self.tau, pts) >= 0):
            raise ScenarioError(f"tau is not temporal somewhere on the box of {self.name!r}")


# smoothed step ---------------------------------------------------------------

def smooth_step(t) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, strictly increasing between."""
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 1.0, 1.0, 0.0)
    inner = (t > 0) & (t < 1)
    ti = t[inner]
    out[inner] = expit(1.0 / (1.0 - ti) - 1.0 / ti)
    return out


def smooth_step_d1(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inner = (t > 0) & (t < 1)
    ti = t[inner]
    s = expit(1.0 / (1.0 - ti) - 1.0 / ti)
    out[inner] = s * (1.0 - s) * (1.0 / ti**2 + 1.0 / (1.0 - ti) ** 2)
    return out


# minkowski and GRW -------------------------------------------------------------

def build_minkowski(dim: int = 2, half_width: float = 1.5) -> Scenario:
    g = minkowski(dim)
    box = Box((-half_width,) * dim, (half_width,) * dim)
    return Scenario(
        name="minkowski2d" if dim == 2 else f"minkowski{dim}d",
        g=g, tau=coordinate_time(dim), box=box, wick=euclidean(dim),
        h={"euclidean": lambda: euclidean(dim)}, wick_complete="yes",
        citation="flat spacetime, tau = t", params={"dim": dim},
    )


_WARPS = {
    "cosh": (np.cosh, np.sinh, np.cosh, np.sinh),
    "exp": (np.exp, np.exp, np.exp, np.exp),
    "one": (np.ones_like, np.zeros_like, np.zeros_like, np.zeros_like),
}


def warp_functions(warp: str, rate: float = 1.0):
    """``f(t) = base(rate * t)`` with its first three derivatives."""
    if warp not in _WARPS:
        raise ScenarioError(f"unknown warp {warp!r}; choose from {sorted(_WARPS)}")
    b0, b1, b2, b3 = _WARPS[warp]
    a = float(rate)
    return (lambda t: b0(a * t), lambda t: a * b1(a * t),
            lambda t: a * a * b2(a * t), lambda t: a**3 * b3(a * t))


def build_grw(warp: str = "cosh", rate: float = 1.0, half_width: float = 1.0) -> Scenario:
    """``-dt^2 + f(t)^2 dx^2`` with ``tau = t`` (lapse 1)."""
    f, df, d2f, _ = warp_functions(warp, rate)
    g = warped_product(f, df, d2f, name=f"grw({warp},{rate:g})")
    W = warped_product(f, df, d2f, sign=1.0, name=f"grw-wick({warp},{rate:g})")
    box = Box((-half_width, -half_width), (half_width, half_width))
    return Scenario(name="grw", g=g, tau=coordinate_time(2), box=box, wick=W,
                    wick_complete="yes" if warp != "exp" else "unknown",
                    citation="warped product over a line", params={"warp": warp, "rate": rate})


def build_grw_conformal(half_width: float = 0.8) -> Scenario:
    """The ``f = cosh`` GRW in conformal time ``T``: ``sec^2 T (-dT^2 + dx^2)``.

    Here ``tau = ln(sec T + tan T)`` equals the proper time ``t`` of the warped
    chart, so the lapse is 1, while null directions are the lattice diagonals.
    """
    if not 0 < half_width < math.pi / 2:
        raise ScenarioError("conformal time box must sit inside (-pi/2, pi/2)")

    def conf(T):
        return 1.0 / np.cos(T) ** 2

    def conf1(T):
        return 2.0 * np.tan(T) / np.cos(T) ** 2

    def conf2(T):
        sec2 = 1.0 / np.cos(T) ** 2
        return 4.0 * sec2 * np.tan(T) ** 2 + 2.0 * sec2**2

    def make(sign):
        def gfun(x):
            c = conf(x[..., 0])
            out = np.zeros(x.shape[:-1] + (2, 2))
            out[..., 0, 0] = sign * c
            out[..., 1, 1] = c
            return out

        def d1(x):
            c = conf1(x[..., 0])
            out = np.zeros(x.shape[:-1] + (2, 2, 2))
            out[..., 0, 0, 0] = sign * c
            out[..., 1, 1, 0] = c
            return out

        def d2(x):
            c = conf2(x[..., 0])
            out = np.zeros(x.shape[:-1] + (2, 2, 2, 2))
            out[..., 0, 0, 0, 0] = sign * c
            out[..., 1, 1, 0, 0] = c
            return out

        return gfun, d1, d2

    dom = Box((-math.pi / 2 + 1e-9, -np.inf), (math.pi / 2 - 1e-9, np.inf))
    gf, gd1, gd2 = make(-1.0)
    wf, wd1, wd2 = make(1.0)
    g = MetricField(gf, 2, gd1, gd2, "lorentzian", domain=dom, name="grw-conformal")
    W = MetricField(wf, 2, wd1, wd2, "riemannian", domain=dom, name="grw-conformal-wick")

    def tau(x):
        T = x[..., 0]
        return np.log(1.0 / np.cos(T) + np.tan(T))

    def tau1(x):
        out = np.zeros(x.shape)
        out[..., 0] = 1.0 / np.cos(x[..., 0])
        return out

    def tau2(x):
        T = x[..., 0]
        out = np.zeros(x.shape + (2,))
        out[..., 0, 0] = np.tan(T) / np.cos(T)
        return out

    def tau3(x):
        T = x[..., 0]
        out = np.zeros(x.shape + (2, 2))
        out[..., 0, 0, 0] = (np.tan(T) ** 2 + 1.0 / np.cos(T) ** 2) / np.cos(T)
        return out

    box = Box((-half_width, -half_width), (half_width, half_width))
    return Scenario(name="grw-conformal", g=g, tau=TemporalField(tau, 2, tau1, tau2, tau3, name="gd^-1(T)"),
                    box=box, wick=W, wick_complete="yes",
                    citation="cosh-warped product in conformal time", params={"half_width": half_width})


def build_de_sitter(i: float = 0.0, n: int = 2, half_width: float = 1.0) -> Scenario:
    """``-dt^2 + cosh^2(t + i) g_sphere`` with ``tau = t + i``; ``n`` is the spatial sphere dimension + 1."""
    if n == 2:
        fiber = circle()
    elif n == 3:
        fiber = round_sphere()
    else:
        raise ScenarioError("de Sitter members are available for n = 2 (circle) and n = 3 (2-sphere)")
    s = float(i)
    f = lambda t: np.cosh(t + s)  # noqa: E731
    df = lambda t: np.sinh(t + s)  # noqa: E731
    g = warped_over(f, df, f, fiber, -1.0, name=f"de-sitter(i={i:g})")
    W = warped_over(f, df, f, fiber, 1.0, name=f"de-sitter-wick(i={i:g})")
    dim = n
    if n == 2:
        box = Box((-half_width, 0.0), (half_width, 2 * math.pi))
    else:
        box = Box((-half_width, 0.3, 0.0), (half_width, math.pi - 0.3, 2 * math.pi))
    return Scenario(name="de-sitter", g=g, tau=coordinate_time(dim, offset=s), box=box, wick=W,
                    wick_complete="yes", citation="de Sitter in global GRW form",
                    params={"i": i, "n": n})


# h-steep but not steep ----------------------------------------------------------

def appendixB_phi(t, k_max: int = 8):
    """``(phi(t), phi'(t))``: identity outside the bands around ``k^2``, compressed slope ``1/k^2`` at ``k^2``."""
    t = np.asarray(t, dtype=float)
    phi = t.copy()
    dphi = np.ones_like(t)
    for k in range(1, k_max + 1):
        k2 = float(k * k)
        lk = t / k2 + k2 - 1.0
        lo = (t >= k2 - 1.0 / k2) & (t < k2)
        hi = (t >= k2) & (t <= k2 + 1.0 / k2)
        a = (t - (k2 - 1.0 / k2)) * k2
        b = (t - k2) * k2
        sa, dsa = smooth_step(a), smooth_step_d1(a)
        sb, dsb = smooth_step(b), smooth_step_d1(b)
        phi = np.where(lo, t + (lk - t) * sa, phi)
        dphi = np.where(lo, 1.0 + (1.0 / k2 - 1.0) * sa + (lk - t) * dsa * k2, dphi)
        phi = np.where(hi, lk + (t - lk) * sb, phi)
        dphi = np.where(hi, 1.0 / k2 + (1.0 - 1.0 / k2) * sb + (t - lk) * dsb * k2, dphi)
    return phi, dphi


def appendixB_band(k: int) -> Box:
    """Box covering band ``k`` in ``t`` and ``|x| <= 1``."""
    k2 = float(k * k)
    return Box((k2 - 1.0 / k2, -1.0), (k2 + 1.0 / k2, 1.0))


def build_appendixB(k_max: int = 8) -> Scenario:
    dim = 2

    def tau(x):
        return appendixB_phi(x[..., 0], k_max)[0]

    def tau1(x):
        out = np.zeros(x.shape)
        out[..., 0] = appendixB_phi(x[..., 0], k_max)[1]
        return out

    def h():
        def hf(x):
            d = appendixB_phi(x[..., 0], k_max)[1]
            return 0.5 * (d**2)[..., None, None] * np.eye(dim)

        return MetricField(hf, dim, signature="riemannian", name="half-phi'^2-euclidean")

    box = Box((0.0, -1.0), (float(k_max**2 + 1), 1.0))
    return Scenario(name="appendixB", g=minkowski(dim), tau=TemporalField(tau, dim, tau1, name="phi(t)"),
                    box=box, h={"phi": h}, wick_complete="unknown",
                    citation="h-steep, not steep, temporal function on flat space",
                    params={"k_max": k_max})


# Wick distance does not encode causality ----------------------------------------

def appendixD_f(t, x) -> np.ndarray:
    """Warp: 1 outside the strip region, 1/1000 on the inner band, smooth collar in ``t`` between."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    in_x = (x >= 0.2) & (x <= 1.25)
    collar = smooth_step((np.abs(t) - 0.06) / 0.04)
    inner = 1e-3 + (1.0 - 1e-3) * collar
    return np.where(in_x, inner, 1.0)


def build_appendixD() -> Scenario:
    def make(sign):
        def gfun(x):
            f = appendixD_f(x[..., 0], x[..., 1])
            out = np.zeros(x.shape[:-1] + (2, 2))
            out[..., 0, 0] = sign
            out[..., 1, 1] = f * f
            return out

        return gfun

    g = MetricField(make(-1.0), 2, name="appendixD")
    W = MetricField(make(1.0), 2, signature="riemannian", name="appendixD-wick")
    box = Box((-0.2, -0.1), (1.0, 1.3))
    return Scenario(name="appendixD", g=g, tau=coordinate_time(2), box=box, wick=W, wick_complete="yes",
                    citation="diagonal metric with a slow strip", extra={"warp": appendixD_f})


def appendixD_alpha():
    """Piecewise causal polyline from (0,0) to (1,1.2) in ``(t, x)`` and its Wick length.

    Breakpoints are chosen so that consecutive pieces join: out along a null
    ray, back to ``t = 0`` at ``x = 0.2``, a shallow timelike tent across the
    slow band to ``x = 1.2``, then straight up in ``t``.
    """
    peak = 0.5 / math.sqrt(1000)
    vertices = np.array([
        [0.0, 0.0],
        [0.1, 0.1],
        [0.0, 0.2],
        [peak, 0.7],
        [0.0, 1.2],
        [1.0, 1.2],
    ])
    lengths = []
    for a, b in zip(vertices[:-1], vertices[1:]):
        d = b - a

        def speed(s, a=a, d=d):
            f = appendixD_f(a[0] + s * d[0], a[1] + s * d[1])
            return math.sqrt(d[0] ** 2 + (f * d[1]) ** 2)

        lengths.append(quad(speed, 0.0, 1.0, limit=200, epsabs=1e-13, epsrel=1e-12)[0])
    return vertices, float(sum(lengths)), lengths


# boost iterates of a bumped flat plane -----------------------------------------

def bump(r) -> np.ndarray:
    """Smooth radial bump: 1 at 0, supported in ``r < 1``."""
    r = np.asarray(r, dtype=float)
    return smooth_step(2.0 * (1.0 - r))


def boost_map(k: int):
    """``(u, v) -> (2^k u, 2^-k v)`` and its inverse."""
    a = 2.0 ** k

    def fwd(x):
        return np.stack([a * x[..., 0], x[..., 1] / a], axis=-1)

    def inv(x):
        return np.stack([x[..., 0] / a, a * x[..., 1]], axis=-1)

    return fwd, inv, np.diag([a, 1.0 / a])


def build_boost_bump(k: int = 0, center=(1.5, 0.0), radius: float = 0.5, amplitude: float = 0.5,
                     basepoint=(0.0, 0.0)) -> Scenario:
    """Member ``k``: the boost iterate carries the bumped metric so its bump sits at ``phi^k(U)``.

    Null coordinates ``(u, v)`` with ``-dt^2 + dx^2 = -2 du dv``. The
    perturbation is ``amplitude * bump * dx^2`` with ``dx = (du - dv)/sqrt 2``.
    """
    c = np.asarray(center, dtype=float)
    if np.linalg.norm(np.asarray(basepoint, dtype=float) - c) < radius:
        raise ScenarioError("the bump must not cover the basepoint")
    if amplitude <= -1:
        raise ScenarioError("amplitude must exceed -1 to keep the metric Lorentzian")
    fwd, inv, J = boost_map(k)
    Jinv = np.linalg.inv(J)
    flat = np.array([[0.0, -1.0], [-1.0, 0.0]])
    dx = np.array([1.0, -1.0]) / math.sqrt(2.0)
    pert = np.outer(dx, dx)
    pert_k = Jinv.T @ pert @ Jinv

    def gfun(y):
        b = bump(np.linalg.norm(inv(y) - c, axis=-1) / radius)
        return flat + amplitude * b[..., None, None] * pert_k

    g = MetricField(gfun, 2, name=f"boost-bump(k={k})")
    w = np.array([2.0 ** (-k), 2.0**k]) / math.sqrt(2.0)  # d(t o phi^-k)

    def tau(y):
        return y @ w

    def tau1(y):
        return np.broadcast_to(w, y.shape).copy()

    umin = (c[0] - radius) * 2.0**k
    box = Box((-4.0, -4.0), (4.0, 4.0))
    return Scenario(name="boost-bump", g=g, tau=TemporalField(tau, 2, tau1, name="t o phi^-k"), box=box,
                    citation="boost iterates of a locally bumped flat plane",
                    params={"k": k, "center": tuple(c), "radius": radius, "amplitude": amplitude},
                    extra={"support_u_min": umin, "observer": (2.0**k / math.sqrt(2), 2.0 ** (-k) / math.sqrt(2)),
                           "map": (fwd, inv, J)})


# registry and config ------------------------------------------------------------

_BUILDERS = {
    "minkowski2d": lambda **p: build_minkowski(2, **p),
    "minkowski": build_minkowski,
    "grw": build_grw,
    "grw-conformal": build_grw_conformal,
    "de-sitter": build_de_sitter,
    "appendixB": build_appendixB,
    "appendixD": lambda **p: build_appendixD(**p),
    "boost-bump": build_boost_bump,
}

_INT_PARAMS = {"dim", "n", "k", "k_max"}


def boost_bump(k: int = 0, center=(1.5, 0.0), radius: float = 0.5, amplitude: float = 0.5) -> Scenario:
    """Member ``k`` of the boosted-bump family (see ``build_boost_bump``)."""
    return build_boost_bump(k, center=center, radius=radius, amplitude=amplitude)


def scenario_names():
    return sorted(_BUILDERS)


def _coerce(key: str, value: str):
    if key in _INT_PARAMS:
        return int(value)
    try:
        return float(value)
    except ValueError:
        return value


def parse_params(text: str) -> dict:
    """``"i=3, n=2"`` -> ``{"i": 3.0, "n": 2}``."""
    out = {}
    for item in filter(None, (s.strip() for s in (text or "").split(","))):
        if "=" not in item:
            raise ScenarioError(f"malformed parameter {item!r}; expected key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def build(name: str, **params) -> Scenario:
    if name not in _BUILDERS:
        raise ScenarioError(f"unknown scenario {name!r}; known: {', '.join(scenario_names())}")
    try:
        scen = _BUILDERS[name](**params)
    except TypeError as exc:
        raise ScenarioError(f"invalid parameters for {name!r}: {exc}") from exc
    scen.params = {**scen.params, **params}
    return scen


def parse_point(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ScenarioError(f"malformed point {text!r}") from exc


@dataclass
class ScenarioConfig:
    name: str
    params: dict
    box: Optional[Box] = None
    spacing: Optional[float] = None
    stencil: Optional[int] = None

    def scenario(self) -> Scenario:
        scen = build(self.name, **self.params)
        if self.box is not None:
            scen.box = self.box
        return scen


def parse_config(text: str) -> ScenarioConfig:
    """Parse a ``[scenario]`` section with keys name, params, box, spacing, stencil.

    ``box`` is written ``lower ; upper`` with comma-separated coordinates.
    """
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"unreadable scenario config: {exc}") from exc
    if "scenario" not in cp:
        raise ScenarioError("config needs a [scenario] section")
    sec = cp["scenario"]
    unknown = set(sec) - {"name", "params", "box", "spacing", "stencil"}
    if unknown:
        raise ScenarioError(f"unknown config keys: {sorted(unknown)}")
    if "name" not in sec:
        raise ScenarioError("config needs a scenario name")
    box = None
    if sec.get("box"):
        parts = sec["box"].split(";")
        if len(parts) != 2:
            raise ScenarioError("box must be written 'lower ; upper'")
        box = Box(parse_point(parts[0]), parse_point(parts[1]))
    spacing = float(sec["spacing"]) if sec.get("spacing") else None
    stencil = int(sec["stencil"]) if sec.get("stencil") else None
    if spacing is not None and spacing <= 0:
        raise ScenarioError("spacing must be positive")
    if stencil is not None and stencil < 1:
        raise ScenarioError("stencil radius must be at least 1")
    return ScenarioConfig(sec["name"].strip(), parse_params(sec.get("params", "")), box, spacing, stencil)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
