"""Temporal functions: gradients, lapse, canonical representative, Wick rotation,
orthogonal splitting, steepness and h-steepness verdicts, cone widening."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize

from .chart import (
    FD_STEP,
    ChartError,
    MetricField,
    _as_points,
    central_diff,
    orthonormal_frame,
    second_diff,
)

NULL_TOL = 1e-9
TIGHT_TOL = 1e-7


class TemporalError(ChartError):
    """The function is not temporal (gradient not timelike) where it was evaluated."""


class TemporalField:
    """Scalar field with optional analytic differential, Hessian and third partials."""

    def __init__(self, func: Callable, dim: int, d1: Optional[Callable] = None,
                 d2: Optional[Callable] = None, d3: Optional[Callable] = None,
                 step: float = FD_STEP, name: str = ""):
        self.func = func
        self.dim = int(dim)
        self._d1 = d1
        self._d2 = d2
        self._d3 = d3
        self.step = step
        self.name = name

    def __repr__(self):
        return f"TemporalField({self.name or 'anonymous'})"

    @property
    def analytic_order(self) -> int:
        for k, d in enumerate((self._d1, self._d2, self._d3)):
            if d is None:
                return k
        return 3

    def __call__(self, x) -> np.ndarray:
        return self.func(_as_points(x, self.dim))

    def d1(self, x) -> np.ndarray:
        x = _as_points(x, self.dim)
        if self._d1 is not None:
            return self._d1(x)
        return central_diff(self.func, x, self.step)

    def d2(self, x) -> np.ndarray:
        x = _as_points(x, self.dim)
        if self._d2 is not None:
            return self._d2(x)
        if self._d1 is not None:
            return central_diff(self._d1, x, self.step)
        return second_diff(self.func, x, self.step)

    def d3(self, x) -> np.ndarray:
        x = _as_points(x, self.dim)
        if self._d3 is not None:
            return self._d3(x)
        if self._d2 is not None:
            return central_diff(self._d2, x, self.step)
        if self._d1 is not None:
            return second_diff(self._d1, x, self.step)
        return central_diff(lambda y: second_diff(self.func, y, self.step), x, self.step)

    def numeric(self) -> "TemporalField":
        """Same function with every derivative by finite differences."""
        return TemporalField(self.func, self.dim, step=self.step, name=self.name + "[fd]")


def coordinate_time(dim: int = 2, offset: float = 0.0, scale: float = 1.0) -> TemporalField:
    """``tau = scale * x^0 + offset``."""

    def f(x):
        return scale * x[..., 0] + offset

    def d1(x):
        out = np.zeros(x.shape)
        out[..., 0] = scale
        return out

    def d2(x):
        return np.zeros(x.shape + (dim,))

    def d3(x):
        return np.zeros(x.shape + (dim, dim))

    return TemporalField(f, dim, d1, d2, d3, name=f"{scale:g}*t+{offset:g}")


def _quad(G, a, b=None):
    b = a if b is None else b
    return np.einsum("...i,...ij,...j->...", a, G, b)


def gradient_tau(g: MetricField, tau: TemporalField, p) -> np.ndarray:
    """``nabla tau = g^{-1} d tau``; raises unless it is timelike (hence past-directed)."""
    p = _as_points(p, g.dim)
    G = g(p)
    dtau = tau.d1(p)
    grad = np.linalg.solve(G, dtau[..., None])[..., 0]
    norm = _quad(G, grad)
    if np.any(~(norm < 0)):
        raise TemporalError(f"gradient of {tau!r} is not timelike for {g!r}")
    return grad


def gradient_norm(g: MetricField, tau: TemporalField, p) -> np.ndarray:
    """``g(nabla tau, nabla tau) = g^{ab} d_a tau d_b tau``."""
    p = _as_points(p, g.dim)
    dtau = tau.d1(p)
    Ginv = np.linalg.inv(g(p))
    return _quad(Ginv, dtau)


def lapse(g: MetricField, tau: TemporalField, p) -> np.ndarray:
    """``Lambda = -1 / g(nabla tau, nabla tau)``."""
    q = gradient_norm(g, tau, p)
    if np.any(~(q < 0)):
        raise TemporalError(f"{tau!r} is not temporal (gradient not timelike)")
    return -1.0 / q


def canonical_rep(g: MetricField, tau: TemporalField, p) -> np.ndarray:
    """Matrix of ``g / Lambda`` at ``p``; the tau-gradient becomes unit."""
    p = _as_points(p, g.dim)
    Gc = g(p) / lapse(g, tau, p)[..., None, None]
    dtau = tau.d1(p)
    unit = _quad(np.linalg.inv(Gc), dtau)
    if np.any(np.abs(unit + 1.0) > 1e-10):
        raise TemporalError("canonical representative failed the unit-gradient identity")
    return Gc


def canonical_field(g: MetricField, tau: TemporalField) -> MetricField:
    def f(x):
        return g(x) / lapse(g, tau, x)[..., None, None]

    return MetricField(f, g.dim, signature="lorentzian", domain=g.domain, periodic=g.periodic,
                       step=g.step, name=f"canonical({g.name})")


def wick_matrix(G: np.ndarray, dtau: np.ndarray) -> np.ndarray:
    """``G / Lambda + 2 dtau (x) dtau`` for metric matrices and differentials."""
    q = _quad(np.linalg.inv(G), dtau)
    if np.any(~(q < 0)):
        raise TemporalError("Wick rotation needs a timelike gradient")
    lam = -1.0 / q
    return G / lam[..., None, None] + 2.0 * np.einsum("...i,...j->...ij", dtau, dtau)


def wick_rotate(g: MetricField, tau: TemporalField, p) -> np.ndarray:
    """Wick-rotated Riemannian metric at ``p``; raises if it fails to be positive definite."""
    p = _as_points(p, g.dim)
    W = wick_matrix(g(p), tau.d1(p))
    if np.any(np.linalg.eigvalsh(W)[..., 0] <= 0):
        raise TemporalError("Wick-rotated metric is not positive definite")
    return W


def wick_metric(g: MetricField, tau: TemporalField) -> MetricField:
    """Wick-rotated metric as a field (finite-difference jets)."""

    def f(x):
        return wick_matrix(g(x), tau.d1(x))

    return MetricField(f, g.dim, signature="riemannian", domain=g.domain, periodic=g.periodic,
                       step=g.step, name=f"wick({g.name})")


def observer_wick(g: MetricField, T: Callable, tol: float = 1e-9) -> MetricField:
    """``g + 2 T_flat (x) T_flat`` for a unit timelike vector field ``T``."""

    def f(x):
        G = g(x)
        Tx = np.broadcast_to(np.asarray(T(x), dtype=float), x.shape)
        norm = _quad(G, Tx)
        if np.any(np.abs(norm + 1.0) > tol):
            raise TemporalError("observer field must satisfy g(T, T) = -1")
        Tb = np.einsum("...ij,...j->...i", G, Tx)
        return G + 2.0 * np.einsum("...i,...j->...ij", Tb, Tb)

    return MetricField(f, g.dim, signature="riemannian", domain=g.domain, periodic=g.periodic,
                       step=g.step, name=f"observer_wick({g.name})")


def split(g: MetricField, tau: TemporalField, p, v):
    """``v = v_tau + v_perp`` with ``v_tau`` along the gradient and ``v_perp`` g-orthogonal to it."""
    p = _as_points(p, g.dim)
    v = np.asarray(v, dtype=float)
    G = g(p)
    grad = gradient_tau(g, tau, p)
    coef = _quad(G, v, grad) / _quad(G, grad)
    v_tau = coef[..., None] * grad
    return v_tau, v - v_tau


def lemma_identities(g: MetricField, tau: TemporalField, p, v, null_tol: float = NULL_TOL):
    """Residuals ``|dtau(v)^2 - gW(v_tau, v_tau)|`` and ``|dtau(v)^2 - gW(v_perp, v_perp)|`` for null v.

    Residuals are relative to ``dtau(v)^2``.
    """
    p = _as_points(p, g.dim)
    v = np.asarray(v, dtype=float)
    G = g(p)
    dtau = tau.d1(p)
    W = wick_matrix(G, dtau)
    vv = _quad(G, v)
    if np.any(np.abs(vv) > null_tol * np.einsum("...i,...i->...", v, v)):
        raise ValueError("lemma identities need a null vector")
    v_tau, v_perp = split(g, tau, p, v)
    lhs = np.einsum("...i,...i->...", dtau, v) ** 2
    r_tau = np.abs(lhs - _quad(W, v_tau)) / lhs
    r_perp = np.abs(lhs - _quad(W, v_perp)) / lhs
    return r_tau, r_perp


def null_vectors(g: MetricField, tau: TemporalField, p, directions: np.ndarray) -> np.ndarray:
    """Future null vectors ``e0 + omega`` for unit spatial directions ``omega`` in a g-orthonormal frame."""
    G = g(p)
    grad = gradient_tau(g, tau, p)
    E = orthonormal_frame(G, first=-grad)
    omega = np.asarray(directions, dtype=float)
    omega = omega / np.linalg.norm(omega, axis=-1, keepdims=True)
    return E[:, 0] + omega @ E[:, 1:].T


def is_steep(g: MetricField, tau: TemporalField, p, c: float) -> bool:
    """Pointwise steepness test ``g(nabla tau, nabla tau) <= -c``."""
    return bool(np.all(gradient_norm(g, tau, p) <= -c))


def steepness_sweep(g: MetricField, tau: TemporalField, box, c: float, n: int = 41):
    """Infimum of ``-g(nabla tau, nabla tau)`` over a box grid and the steep verdict."""
    pts = box.grid(n)
    q = -gradient_norm(g, tau, pts)
    i = int(np.argmin(q))
    return {"inf": float(q[i]), "argmin": pts[i], "steep": bool(q[i] >= c), "c": c}


@dataclass
class SteepReport:
    point: np.ndarray
    margin: float
    witness: np.ndarray
    samples: int
    status: str  # "pass", "tight" or "fail"

    @property
    def h_steep(self) -> bool:
        return self.status != "fail"


def _cone_params_to_vectors(E: np.ndarray, r: np.ndarray, omega: np.ndarray) -> np.ndarray:
    return E[:, 0] + (r[:, None] * omega) @ E[:, 1:].T


def _sphere_directions(m: int, count: int) -> np.ndarray:
    """Roughly uniform unit vectors in R^m (m >= 1)."""
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        th = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    # Fibonacci lattice on S^2; higher spheres by seeded Gaussian sampling
    if m == 3:
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        phi = np.pi * (1 + 5**0.5) * k
        rr = np.sqrt(1 - z * z)
        return np.stack([rr * np.cos(phi), rr * np.sin(phi), z], axis=-1)
    v = np.random.default_rng(0).normal(size=(count, m))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def steep_margins(dtau: np.ndarray, H: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``dtau(v) / |v|_h - 1`` for vectors ``v[k]`` at one point."""
    hv = np.sqrt(np.einsum("ki,ij,kj->k", v, H, v))
    return (v @ dtau) / hv - 1.0


def is_h_steep(g: MetricField, tau: TemporalField, h: MetricField, p, resolution: Optional[int] = None,
               interior: int = 24) -> SteepReport:
    """Minimize ``dtau(v) - |v|_h`` over future causal ``v`` with ``|v|_h = 1``.

    Causal directions are ``e0 + r * omega`` in a g-orthonormal frame with
    ``0 <= r <= 1`` (``r = 1`` is the null boundary). The boundary is sampled at
    ``resolution`` directions, the interior on an ``interior`` radial grid, and
    the best sample is refined once by a bounded local search.
    """
    p = np.asarray(p, dtype=float)
    H = h(p)
    if np.linalg.eigvalsh(H)[0] <= 0:
        raise ChartError("h must be Riemannian at p")
    dim = g.dim
    m = dim - 1
    if resolution is None:
        resolution = 720 if dim == 2 else 10_000
    G = g(p)
    dtau = tau.d1(p)
    grad = gradient_tau(g, tau, p)
    E = orthonormal_frame(G, first=-grad)
    if m == 1:
        r_all = np.linspace(-1.0, 1.0, resolution)
        V = _cone_params_to_vectors(E, np.abs(r_all), np.sign(r_all)[:, None] + (r_all == 0)[:, None])
    else:
        omega = _sphere_directions(m, resolution)
        radii = np.linspace(0.0, 1.0, interior + 1)
        om_int = _sphere_directions(m, max(8, resolution // 50))
        rr = np.repeat(radii, len(om_int))
        V = np.concatenate([
            _cone_params_to_vectors(E, np.ones(len(omega)), omega),
            _cone_params_to_vectors(E, rr, np.tile(om_int, (len(radii), 1))),
        ])
    margins = steep_margins(dtau, H, V)
    k = int(np.argmin(margins))
    best, witness = float(margins[k]), V[k]
    samples = len(V)

    # local refinement around the best sample in cone coordinates
    w = np.linalg.solve(E, witness)
    x0 = w[1:] / w[0]

    def objective(y):
        nrm = np.linalg.norm(y)
        if nrm > 1.0:
            y = y / nrm
        vec = E[:, 0] + E[:, 1:] @ y
        return float(steep_margins(dtau, H, vec[None, :])[0])

    res = minimize(objective, x0, method="L-BFGS-B", bounds=[(-1.0, 1.0)] * m)
    samples += int(res.nfev)
    if res.fun < best:
        y = res.x / max(1.0, np.linalg.norm(res.x))
        best, witness = float(res.fun), E[:, 0] + E[:, 1:] @ y
    witness = witness / np.sqrt(witness @ H @ witness)
    if abs(best) <= TIGHT_TOL:
        status = "tight"
    else:
        status = "pass" if best > 0 else "fail"
    return SteepReport(point=p, margin=best, witness=witness, samples=samples, status=status)


def weak_temporal_ratios(g: MetricField, tau: TemporalField, h: MetricField, p, resolution: int = 720):
    """Extremes of ``dtau(v) / |v|_h`` over sampled future causal directions.

    The infinitesimal form of the two-sided Lipschitz bound; returns
    ``(lower, upper, C)`` with ``C = max(upper, 1 / lower)``.
    """
    p = np.asarray(p, dtype=float)
    G = g(p)
    E = orthonormal_frame(G, first=-gradient_tau(g, tau, p))
    m = g.dim - 1
    omega = _sphere_directions(m, resolution)
    radii = np.linspace(0.0, 1.0, 33)
    V = np.concatenate([_cone_params_to_vectors(E, np.full(len(omega), r), omega) for r in radii])
    ratios = steep_margins(tau.d1(p), h(p), V) + 1.0
    lo, hi = float(ratios.min()), float(ratios.max())
    return lo, hi, max(hi, 1.0 / lo)


def widen_cones(g: MetricField, tau: TemporalField, alpha: Callable) -> MetricField:
    """``g' = g - alpha dtau^2`` with ``0 < alpha < Lambda`` checked at every evaluation."""

    def f(x):
        G = g(x)
        a = np.broadcast_to(np.asarray(alpha(x), dtype=float), x.shape[:-1])
        lam = lapse(g, tau, x)
        if np.any(a < 0) or np.any(a >= lam):
            raise TemporalError("cone widening requires 0 <= alpha < lapse (cone collapse)")
        dtau = tau.d1(x)
        return G - a[..., None, None] * np.einsum("...i,...j->...ij", dtau, dtau)

    return MetricField(f, g.dim, signature="lorentzian", domain=g.domain, periodic=g.periodic,
                       step=g.step, name=f"widened({g.name})")


def radial_completeness_probe(W: MetricField, center, budget: float, directions: int = 16,
                              max_radius: float = 1e3, samples: int = 400) -> dict:
    """Evidence (not a verdict) for completeness: straight coordinate rays whose
    W-length from ``center`` exceeds ``budget`` before leaving ``max_radius``."""
    center = np.asarray(center, dtype=float)
    om = _sphere_directions(W.dim, directions)
    s = np.linspace(0.0, max_radius, samples)
    lengths = []
    for u in om:
        pts = center + s[:, None] * u
        speed = np.sqrt(np.einsum("i,kij,j->k", u, W(pts), u))
        L = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(s))])
        lengths.append(float(L[-1]))
    return {"min_length": min(lengths), "budget": budget, "exceeds_budget": bool(min(lengths) > budget)}
