"""Geodesics, exponential map and its shooting inverse, parallel transport,
anchored metrics and block-orthogonal frame alignment."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import DOP853, OdeSolution
from scipy.linalg import polar

from .chart import ChartError, DomainError, MetricField, christoffel, orthonormal_frame

RTOL = 1e-12
ATOL = 1e-12
SHOOT_TOL = 1e-8


class GeodesicError(ChartError):
    pass


def integrate(fun, span, y0, rtol: float = RTOL, atol: float = ATOL):
    """Adaptive DOP853 returning a dense ``OdeSolution``.

    Raises when a step falls below ``LORENTZKIT_MIN_STEP`` or the stepper fails.
    """
    floor = float(os.environ.get("LORENTZKIT_MIN_STEP", 0.0))
    solver = DOP853(fun, span[0], np.asarray(y0, dtype=float), span[1], rtol=rtol, atol=atol)
    ts, interps = [span[0]], []
    while solver.status == "running":
        msg = solver.step()
        if solver.status == "failed":
            raise GeodesicError(f"integration failed: {msg}")
        if floor > 0 and solver.step_size is not None and solver.step_size < floor and solver.status == "running":
            raise GeodesicError(f"step size {solver.step_size:.2e} fell below the floor {floor:.2e}")
        ts.append(solver.t)
        interps.append(solver.dense_output())
    return OdeSolution(ts, interps)


def _check_domain(g: MetricField, x: np.ndarray) -> None:
    if g.domain is not None and not np.all(g.domain.contains(x, g.periodic)):
        raise DomainError("geodesic left the chart domain")


def _gamma(g: MetricField, x: np.ndarray) -> np.ndarray:
    return christoffel(g, x)


@dataclass
class Curve:
    """Parametrized curve with position and velocity on ``[s0, s1]``."""

    position: Callable[[float], np.ndarray]
    velocity: Callable[[float], np.ndarray]
    s0: float
    s1: float

    @classmethod
    def polyline_segment(cls, a, b) -> "Curve":
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return cls(lambda s: a + s * (b - a), lambda s: b - a, 0.0, 1.0)


@dataclass
class GeodesicCurve(Curve):
    s: np.ndarray = None
    x: np.ndarray = None
    v: np.ndarray = None
    energy: np.ndarray = None

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))

    @property
    def end(self) -> np.ndarray:
        return self.x[-1]


def geodesic(g: MetricField, p, v, s_max: float = 1.0, rtol: float = RTOL, atol: float = ATOL,
             samples: int = 201) -> GeodesicCurve:
    """Solve ``x'' + Gamma(x', x') = 0`` from ``(p, v)`` on ``[0, s_max]`` (adaptive DOP853)."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    n = g.dim
    _check_domain(g, p)

    def rhs(_, y):
        x, u = y[:n], y[n:]
        if g.domain is not None and not g.domain.contains(x, g.periodic):
            raise DomainError("geodesic left the chart domain")
        acc = -np.einsum("kij,i,j->k", _gamma(g, x), u, u)
        return np.concatenate([u, acc])

    s_eval = np.linspace(0.0, s_max, samples)
    if s_max == 0.0 or not np.any(v):
        x = np.broadcast_to(p, (samples, n)).copy()
        u = np.zeros((samples, n))
        return GeodesicCurve(lambda s: p.copy(), lambda s: np.zeros(n), 0.0, s_max, s_eval, x, u,
                             np.zeros(samples))
    dense = integrate(rhs, (0.0, s_max), np.concatenate([p, v]), rtol, atol)
    y = dense(s_eval)
    x, u = y[:n].T, y[n:].T
    energy = np.einsum("ki,kij,kj->k", u, g(x), u)
    return GeodesicCurve(lambda s: dense(s)[:n], lambda s: dense(s)[n:], 0.0, s_max, s_eval, x, u, energy)


def exp_map(g: MetricField, p, v) -> np.ndarray:
    return geodesic(g, p, v, 1.0, samples=2).end


def log_map(g: MetricField, p, x, v0=None, tol: float = SHOOT_TOL, max_iter: int = 50) -> np.ndarray:
    """Shooting inverse of ``exp_p`` by damped Newton with a finite-difference Jacobian."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    v = (x - p).copy() if v0 is None else np.asarray(v0, dtype=float).copy()
    n = g.dim
    scale = max(1.0, float(np.linalg.norm(x - p)))
    r = exp_map(g, p, v) - x
    for _ in range(max_iter):
        err = np.linalg.norm(r)
        if err < tol * 1e-2 * scale:
            return v
        eps = 1e-7 * max(1.0, np.linalg.norm(v))
        J = np.empty((n, n))
        for c in range(n):
            dv = np.zeros(n)
            dv[c] = eps
            J[:, c] = (exp_map(g, p, v + dv) - exp_map(g, p, v - dv)) / (2 * eps)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as exc:
            raise GeodesicError("shooting Jacobian singular (conjugate point?)") from exc
        lam = 1.0
        while lam > 1e-4:
            try:
                r_new = exp_map(g, p, v + lam * step) - x
            except ChartError:
                r_new = None
            if r_new is not None and np.linalg.norm(r_new) < err:
                break
            lam *= 0.5
        else:
            raise GeodesicError("shooting failed to reduce the residual")
        v = v + lam * step
        r = r_new
    if np.linalg.norm(r) > tol * scale:
        raise GeodesicError(f"shooting did not converge (residual {np.linalg.norm(r):.2e})")
    return v


@dataclass
class Frame:
    """Basis vectors as columns; the first ``index`` of them are timelike."""

    base: np.ndarray
    basis: np.ndarray
    index: int

    def gram(self, g: MetricField) -> np.ndarray:
        return self.basis.T @ g(self.base) @ self.basis

    def eta(self) -> np.ndarray:
        n = self.basis.shape[1]
        return np.diag([-1.0] * self.index + [1.0] * (n - self.index))

    def gram_residual(self, g: MetricField) -> float:
        return float(np.max(np.abs(self.gram(g) - self.eta())))

    @classmethod
    def orthonormal(cls, g: MetricField, p, first=None) -> "Frame":
        p = np.asarray(p, dtype=float)
        G = g(p)
        E = orthonormal_frame(G, first)
        index = int(np.sum(np.einsum("ij,ik,kj->j", E, G, E) < 0))
        return cls(p, E, index)


def transport(g: MetricField, curve: Curve, vectors: np.ndarray, rtol: float = RTOL, atol: float = ATOL):
    """Parallel transport the columns of ``vectors`` along ``curve``; returns the final columns."""
    V0 = np.asarray(vectors, dtype=float)
    n, m = V0.shape

    def rhs(s, y):
        x = curve.position(s)
        u = curve.velocity(s)
        V = y.reshape(n, m)
        return (-np.einsum("kij,i,jm->km", _gamma(g, x), u, V)).ravel()

    sol = integrate(rhs, (curve.s0, curve.s1), V0.ravel(), rtol, atol)
    return sol(curve.s1).reshape(n, m)


def parallel_transport(g: MetricField, curve: Curve, frame: Frame) -> Frame:
    end = np.asarray(curve.position(curve.s1), dtype=float)
    return Frame(end, transport(g, curve, frame.basis), frame.index)


def geodesic_with_frame(g: MetricField, p, v, frame: np.ndarray, rtol: float = RTOL, atol: float = ATOL):
    """Integrate ``exp_p(s v)`` and transport ``frame`` jointly to ``s = 1``."""
    p = np.asarray(p, dtype=float)
    n = g.dim
    E0 = np.asarray(frame, dtype=float)

    def rhs(_, y):
        x, u, E = y[:n], y[n:2 * n], y[2 * n:].reshape(n, n)
        Gam = _gamma(g, x)
        acc = -np.einsum("kij,i,j->k", Gam, u, u)
        dE = -np.einsum("kij,i,jm->km", Gam, u, E)
        return np.concatenate([u, acc, dE.ravel()])

    if not np.any(v):
        return p.copy(), E0.copy()
    y = integrate(rhs, (0.0, 1.0), np.concatenate([p, v, E0.ravel()]), rtol, atol)(1.0)
    return y[:n], y[2 * n:].reshape(n, n)


def latitude_holonomy(theta0: float, radius: float = 1.0) -> float:
    """Rotation angle of a tangent vector transported once around latitude ``theta0`` of a round sphere."""
    from .chart import round_sphere

    g = round_sphere(radius)
    curve = Curve(lambda s: np.array([theta0, s]), lambda s: np.array([0.0, 1.0]), 0.0, 2 * np.pi)
    E0 = np.array([[1.0 / radius], [0.0]])
    E1 = transport(g, curve, E0)[:, 0]
    # components in the orthonormal frame (e_theta, e_phi / sin theta)
    a = E1[0] * radius
    b = E1[1] * radius * np.sin(theta0)
    return float(np.mod(np.arctan2(b, a), 2 * np.pi))


class AnchoredMetric:
    """Riemannian metric on a normal ball: transport the frame radially and flip its timelike part.

    At a point reached by the transported frame ``E`` (columns), the value is
    ``(E E^T)^{-1}``, i.e. the metric making ``E`` orthonormal.
    """

    def __init__(self, g: MetricField, frame: Frame, r0: float):
        if r0 <= 0:
            raise ValueError("ball radius must be positive")
        self.g = g
        self.frame = frame
        self.r0 = float(r0)
        self.center = np.asarray(frame.base, dtype=float)
        self._cache: dict = {}
        if frame.gram_residual(g) > 1e-9:
            raise GeodesicError("anchor frame is not orthonormal")

    @property
    def dim(self) -> int:
        return self.g.dim

    def radial(self, x) -> np.ndarray:
        return log_map(self.g, self.center, x)

    def frame_norm(self, v) -> float:
        """Length of ``v`` in the flipped center metric (components in the anchor frame)."""
        return float(np.linalg.norm(np.linalg.solve(self.frame.basis, v)))

    def frame_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        key = tuple(np.round(x, 14))
        if key in self._cache:
            return self._cache[key]
        v = self.radial(x)
        if self.frame_norm(v) >= self.r0:
            raise DomainError(f"{tuple(x)} lies outside the anchored ball of radius {self.r0}")
        end, E = geodesic_with_frame(self.g, self.center, v, self.frame.basis)
        self._cache[key] = E
        return E

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, self.dim)
        out = np.empty((len(flat), self.dim, self.dim))
        for k, pt in enumerate(flat):
            E = self.frame_at(pt)
            out[k] = np.linalg.inv(E @ E.T)
        return out.reshape(x.shape[:-1] + (self.dim, self.dim))

    def probe_radius(self, directions: int = 16, seed: int = 0) -> float:
        """Largest round-trip error ``|log(exp v) - v|`` for sampled ``v`` on the ball's boundary sphere."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(directions):
            w = rng.normal(size=self.dim)
            w *= 0.999 * self.r0 / np.linalg.norm(w)
            v = self.frame.basis @ w
            back = log_map(self.g, self.center, exp_map(self.g, self.center, v), v0=0.9 * v)
            worst = max(worst, float(np.linalg.norm(back - v)))
        return worst


def anchored_metric(g: MetricField, frame: Frame, r0: float) -> AnchoredMetric:
    return AnchoredMetric(g, frame, r0)


def frame_align(A, index: int):
    """Nearest element of ``O(index) x O(n - index)`` by blockwise polar decomposition.

    Returns ``(Q, residual)`` with residual the Frobenius distance of the
    diagonal blocks to their polar factors plus the off-block mass.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not 0 <= index <= n:
        raise ValueError("frame_align needs a square matrix and 0 <= index <= n")
    Q = np.zeros_like(A)
    resid = 0.0
    for sl in (slice(0, index), slice(index, n)):
        block = A[sl, sl]
        if block.size == 0:
            continue
        if abs(np.linalg.det(block)) < 1e-12:
            raise GeodesicError("diagonal block is singular")
        U, _ = polar(block)
        Q[sl, sl] = U
        resid += float(np.linalg.norm(block - U))
    off = A.copy()
    off[:index, :index] = 0.0
    off[index:, index:] = 0.0
    resid += float(np.linalg.norm(off))
    return Q, resid
