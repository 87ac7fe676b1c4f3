"""Cheeger-Gromov diagnostics for sequences of metrics on a common chart."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.linalg import subspace_angles

from .chart import (
    Box,
    ChartError,
    MetricField,
    central_diff,
    christoffel,
    christoffel_d1,
    covariant_derivative,
    covariant_derivative_d1,
    euclidean,
    riemann_norm,
    tensor_norm,
)
from .geodesic import Frame, frame_align
from .temporal import TemporalField, gradient_norm, is_h_steep, lapse, wick_matrix

GRID = 41
REPORT_COLUMNS = ("index", "box_id", "k", "norm", "lambda", "anchor_residual", "verdict")


class ConvergenceError(ChartError):
    pass


class Diffeo:
    """Chart map with inverse; ``jacobian`` is analytic when given, else central differences.

    ``linear`` marks affine maps (constant Jacobian), whose pullbacks keep analytic jets.
    """

    def __init__(self, forward: Callable, inverse: Callable, jacobian: Optional[Callable] = None,
                 linear: Optional[np.ndarray] = None, name: str = ""):
        self.forward = forward
        self.inverse = inverse
        self._jac = jacobian
        self.linear = None if linear is None else np.asarray(linear, dtype=float)
        self.name = name

    def __call__(self, x):
        return self.forward(np.asarray(x, dtype=float))

    def jacobian(self, x) -> np.ndarray:
        """``J[..., a, b] = d phi^a / d x^b``."""
        x = np.asarray(x, dtype=float)
        if self.linear is not None:
            return np.broadcast_to(self.linear, x.shape[:-1] + self.linear.shape).copy()
        if self._jac is not None:
            return self._jac(x)
        return central_diff(self.forward, x, 1e-6)

    def inverse_residual(self, points) -> float:
        pts = np.asarray(points, dtype=float)
        return float(np.max(np.abs(self.forward(self.inverse(pts)) - pts)))

    def compose(self, other: "Diffeo") -> "Diffeo":
        """``self o other``."""
        lin = None
        if self.linear is not None and other.linear is not None:
            lin = self.linear @ other.linear
        return Diffeo(lambda x: self.forward(other.forward(x)), lambda y: other.inverse(self.inverse(y)),
                      linear=lin, name=f"{self.name}o{other.name}")

    @classmethod
    def identity(cls, dim: int) -> "Diffeo":
        return cls.affine(np.eye(dim), np.zeros(dim), name="id")

    @classmethod
    def affine(cls, A, b, name: str = "") -> "Diffeo":
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        Ainv = np.linalg.inv(A)
        return cls(lambda x: x @ A.T + b, lambda y: (y - b) @ Ainv.T, linear=A, name=name)

    @classmethod
    def translation(cls, shift, name: str = "") -> "Diffeo":
        shift = np.asarray(shift, dtype=float)
        return cls.affine(np.eye(len(shift)), shift, name=name or f"shift{tuple(shift)}")


def pullback_metric(phi: Diffeo, g: MetricField) -> MetricField:
    """``(phi^* g)(x)(u, v) = g(phi(x))(D phi u, D phi v)``."""

    def f(x):
        J = phi.jacobian(x)
        if np.any(np.abs(np.linalg.det(J)) < 1e-300):
            raise ConvergenceError("Jacobian singular; not a diffeomorphism here")
        return np.einsum("...ai,...ab,...bj->...ij", J, g(phi(x)), J)

    d1 = d2 = None
    if phi.linear is not None and g.analytic_order >= 1:
        J = phi.linear

        def d1(x):
            return np.einsum("ai,bj,...abd,dc->...ijc", J, J, g.d1(phi(x)), J)

        if g.analytic_order >= 2:
            def d2(x):
                return np.einsum("ai,bj,...abde,dc,ef->...ijcf", J, J, g.d2(phi(x)), J, J)

    return MetricField(f, g.dim, d1, d2, g.signature, step=g.step, name=f"{phi.name}*{g.name}")


def pullback_function(phi: Diffeo, tau: TemporalField) -> TemporalField:
    """``tau o phi``; analytic derivatives survive affine maps."""
    d1 = d2 = d3 = None
    if phi.linear is not None:
        J = phi.linear
        order = tau.analytic_order
        if order >= 1:
            d1 = lambda x: np.einsum("...a,ai->...i", tau.d1(phi(x)), J)  # noqa: E731
        if order >= 2:
            d2 = lambda x: np.einsum("...ab,ai,bj->...ij", tau.d2(phi(x)), J, J)  # noqa: E731
        if order >= 3:
            d3 = lambda x: np.einsum("...abc,ai,bj,ck->...ijk", tau.d3(phi(x)), J, J, J)  # noqa: E731
    return TemporalField(lambda x: tau(phi(x)), tau.dim, d1, d2, d3, step=tau.step, name=f"{tau.name}o{phi.name}")


def difference(g1: MetricField, g2: MetricField) -> MetricField:
    """``g1 - g2`` as a plain symmetric tensor field (jets analytic when both are)."""
    d1 = d2 = None
    if g1.analytic_order >= 1 and g2.analytic_order >= 1:
        d1 = lambda x: g1.d1(x) - g2.d1(x)  # noqa: E731
    if g1.analytic_order >= 2 and g2.analytic_order >= 2:
        d2 = lambda x: g1.d2(x) - g2.d2(x)  # noqa: E731
    return MetricField(lambda x: g1(x) - g2(x), g1.dim, d1, d2, None, step=g1.step,
                       name=f"{g1.name}-{g2.name}")


def function_difference(t1: TemporalField, t2: TemporalField) -> TemporalField:
    ds = []
    for name in ("d1", "d2", "d3"):
        if min(t1.analytic_order, t2.analytic_order) >= len(ds) + 1:
            ds.append(lambda x, a=getattr(t1, name), b=getattr(t2, name): a(x) - b(x))
        else:
            ds.append(None)
    return TemporalField(lambda x: t1(x) - t2(x), t1.dim, *ds, step=t1.step)


def ck_profile(T: MetricField, href: MetricField, points, k: int, connection: Optional[MetricField] = None):
    """``[sup |nabla^r T|_href for r = 0..k]`` over ``points``; covariant derivatives use ``connection``."""
    if k < 0 or k > 2:
        raise ConvergenceError("C^k norms of 2-tensors are supported for k <= 2")
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise ConvergenceError("empty grid")
    conn = connection if connection is not None else href
    H = href(pts)
    vals = T(pts)
    out = [float(np.max(tensor_norm(vals, H)))]
    if k >= 1:
        dT = T.d1(pts)
        if k == 1:
            Gam = christoffel(conn, pts)
        else:
            Gam, dGam = christoffel_d1(conn, pts)
        nabla = covariant_derivative(vals, dT, Gam)
        out.append(float(np.max(tensor_norm(nabla, H))))
    if k >= 2:
        d_nabla = covariant_derivative_d1(vals, dT, T.d2(pts), Gam, dGam)
        nabla2 = covariant_derivative(nabla, d_nabla, Gam)
        out.append(float(np.max(tensor_norm(nabla2, H))))
    return out


def ck_norm(T: MetricField, href: MetricField, box: Box, k: int, connection: Optional[MetricField] = None,
            n: int = GRID) -> float:
    """Grid supremum of ``max_{r <= k} |nabla^r T|_href`` (a lower bound for the true supremum)."""
    return max(ck_profile(T, href, box.grid(n), k, connection))


def scalar_ck_norm(f: TemporalField, href: MetricField, box: Box, k: int,
                   connection: Optional[MetricField] = None, n: int = GRID) -> float:
    """Grid supremum of ``|nabla^r f|_href`` for ``r = 0..k`` (``k <= 3``)."""
    if k < 0 or k > 3:
        raise ConvergenceError("scalar C^k norms are supported for k <= 3")
    pts = box.grid(n)
    conn = connection if connection is not None else href
    H = href(pts)
    best = float(np.max(np.abs(f(pts))))
    if k >= 1:
        df = f.d1(pts)
        best = max(best, float(np.max(tensor_norm(df, H))))
    if k >= 2:
        Gam, dGam = christoffel_d1(conn, pts)
        hess = covariant_derivative(df, f.d2(pts), Gam)
        best = max(best, float(np.max(tensor_norm(hess, H))))
    if k >= 3:
        d_hess = covariant_derivative_d1(df, f.d2(pts), f.d3(pts), Gam, dGam)
        best = max(best, float(np.max(tensor_norm(covariant_derivative(hess, d_hess, Gam), H))))
    return best


def quasi_isometry_factor(g1, g2, box: Box, n: int = GRID) -> float:
    """Smallest ``lam >= 1`` with ``g1 / lam <= g2 <= lam g1`` on the grid (generalized eigenvalues)."""
    pts = box.grid(n)
    G1 = g1(pts)
    G2 = g2(pts)
    return quasi_isometry_matrices(G1, G2)


def quasi_isometry_matrices(G1: np.ndarray, G2: np.ndarray) -> float:
    try:
        L = np.linalg.cholesky(G1)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("first metric is not positive definite on the box") from exc
    Linv = np.linalg.inv(L)
    M = Linv @ G2 @ np.swapaxes(Linv, -1, -2)
    mu = np.linalg.eigvalsh(M)
    if np.any(mu[..., 0] <= 0):
        raise ConvergenceError("second metric is not positive definite on the box")
    return float(max(np.max(mu[..., -1]), np.max(1.0 / mu[..., 0]), 1.0))


def conformal_check(F: Diffeo, g: MetricField, g2: MetricField, box: Box, href: Optional[MetricField] = None,
                    n: int = 21):
    """Fit ``F^* g2 = Omega g`` pointwise; returns ``(Omega samples, relative residual)``."""
    pts = box.grid(n)
    href = href if href is not None else euclidean(g.dim)
    G = g(pts)
    P = pullback_metric(F, g2)(pts)
    omega = np.einsum("...ij,...ji->...", np.linalg.inv(G), P) / g.dim
    if np.any(omega > 0) and np.any(omega < 0):
        raise ConvergenceError("conformal factor changes sign on the box")
    H = href(pts)
    resid = tensor_norm(P - omega[..., None, None] * G, H) / tensor_norm(G, H)
    return omega, float(np.max(resid))


# sequences ------------------------------------------------------------------

@dataclass
class Member:
    g: MetricField
    phi: Diffeo
    basepoint: np.ndarray
    tau: Optional[TemporalField] = None
    anchor: Optional[Frame] = None
    wick: Optional[MetricField] = None

    def pulled_back(self) -> MetricField:
        return pullback_metric(self.phi, self.g)

    def pulled_back_wick(self) -> MetricField:
        if self.tau is None:
            raise ConvergenceError("member has no temporal function")
        W = self.wick
        if W is None:
            g, tau = self.g, self.tau
            W = MetricField(lambda x: wick_matrix(g(x), tau.d1(x)), g.dim, signature="riemannian",
                            step=g.step, name=f"wick({g.name})")
        return pullback_metric(self.phi, W)

    def pulled_back_tau(self) -> TemporalField:
        return pullback_function(self.phi, self.tau)


@dataclass
class MetricSequence:
    members: List[Member]
    name: str = ""
    start: int = 1  # index of the first member

    def __post_init__(self):
        dims = {m.g.dim for m in self.members}
        if len(dims) > 1:
            raise ConvergenceError("all members must share the chart dimension")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def indices(self):
        return list(range(self.start, self.start + len(self.members)))


@dataclass
class ConvergenceReport:
    rows: List[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def norms(self, box_id: int = 0) -> np.ndarray:
        return np.array([r["norm"] for r in self.rows if r["box_id"] == box_id])

    def column(self, name: str, box_id: int = 0) -> list:
        return [r[name] for r in self.rows if r["box_id"] == box_id]

    def to_json(self) -> str:
        rows = [{k: _json_value(r.get(k)) for k in REPORT_COLUMNS} for r in self.rows]
        return json.dumps({"rows": rows, "summary": _json_value(self.summary)}, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _csv_value(r.get(k)) for k in REPORT_COLUMNS})
        return buf.getvalue()


def _json_value(v):
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, (np.floating, float)):
        return None if not math.isfinite(float(v)) else float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return "" if not math.isfinite(float(v)) else repr(float(v))
    return v


def sequence_verdict(norms: Sequence[float], schedule: Sequence[float]):
    """``("converges" | "diverges" | "inconclusive", {eps: first index from which norms stay below eps})``.

    Divergence needs strict growth across three consecutive indices above the largest tolerance.
    """
    norms = np.asarray(norms, dtype=float)
    first = {}
    for eps in schedule:
        below = norms < eps
        i0 = None
        for i in range(len(norms)):
            if below[i:].all():
                i0 = i
                break
        first[eps] = i0
    if all(v is not None for v in first.values()):
        return "converges", first
    top = max(schedule)
    for i in range(len(norms) - 2):
        a, b, c = norms[i:i + 3]
        if a > top and a < b < c:
            return "diverges", first
    return "inconclusive", first


def check_convergence(seq: MetricSequence, limit: MetricField, boxes: Sequence[Box], k: int,
                      schedule: Sequence[float], href: Optional[MetricField] = None,
                      limit_tau: Optional[TemporalField] = None, limit_point=None, n: int = GRID) -> ConvergenceReport:
    """C^k norms of ``phi_i^* g_i - g`` per box, quasi-isometry factors and verdicts.

    ``href`` (default Euclidean) measures norms; covariant derivatives use the
    limit's connection. With ``limit_tau`` the lambda column compares Wick
    metrics built from that common function.
    """
    href = href if href is not None else euclidean(limit.dim)
    report = ConvergenceReport()
    per_box = []
    for b, box in enumerate(boxes):
        norms, lams = [], []
        pts = box.grid(n)
        for m in seq:
            pb = m.pulled_back()
            norms.append(max(ck_profile(difference(pb, limit), href, pts, k, connection=limit)))
            lam = math.nan
            if limit_tau is not None:
                d = limit_tau.d1(pts)
                try:
                    lam = quasi_isometry_matrices(wick_matrix(limit(pts), d), wick_matrix(pb(pts), d))
                except ChartError:
                    lam = math.inf
            lams.append(lam)
        verdict, first = sequence_verdict(norms, schedule)
        per_box.append({"box": b, "verdict": verdict, "first_index": {
            eps: (None if i is None else seq.indices[i]) for eps, i in first.items()}})
        for idx, nm, lam in zip(seq.indices, norms, lams):
            report.rows.append({"index": idx, "box_id": b, "k": k, "norm": nm, "lambda": lam,
                                "anchor_residual": math.nan, "verdict": verdict})
    report.summary["boxes"] = per_box
    if limit_point is not None:
        p = np.asarray(limit_point, dtype=float)
        report.summary["basepoint_offsets"] = [float(np.linalg.norm(m.phi.inverse(m.basepoint) - p)) for m in seq]
    return report


def anchored_convergence(seq: MetricSequence, limit: MetricField, limit_anchor: Frame,
                         report: Optional[ConvergenceReport] = None):
    """Pull each member anchor back by ``d phi_i^{-1}`` and compare it with the limit anchor.

    Returns ``(residuals, principal angles)``; fills the anchor column of ``report`` if given.
    """
    nu = limit_anchor.index
    E = limit_anchor.basis
    residuals, angles = [], []
    for m in seq:
        if m.anchor is None:
            raise ConvergenceError("every member needs an anchor frame")
        x = m.phi.inverse(m.basepoint)
        J = m.phi.jacobian(x)
        B = np.linalg.solve(J, m.anchor.basis)
        A = np.linalg.solve(E, B)
        try:
            _, res = frame_align(A, nu)
        except ChartError:
            res = math.inf
        residuals.append(res)
        angles.append(float(np.max(subspace_angles(B[:, :nu], E[:, :nu]))))
    if report is not None:
        by_index = dict(zip(seq.indices, residuals))
        for r in report.rows:
            r["anchor_residual"] = by_index.get(r["index"], math.nan)
    return residuals, angles


def canonicalize(member: Member) -> Member:
    """Replace ``g`` by ``g / lapse`` so that the temporal gradient is unit."""
    g, tau = member.g, member.tau
    can = MetricField(lambda x: g(x) / lapse(g, tau, x)[..., None, None], g.dim, signature="lorentzian",
                      periodic=g.periodic, step=g.step, name=f"canonical({g.name})")
    return Member(can, member.phi, member.basepoint, tau, member.anchor)


def wick_pipeline(seq: MetricSequence, h: MetricField, tau: TemporalField, box: Box, k: int = 1,
                  expected_limit: Optional[MetricField] = None, n: int = 21, lapse_tol: float = 1e-9,
                  steep_points: int = 5) -> dict:
    """Check Wick convergence to ``h``, convergence of ``tau_i o phi_i`` to ``tau``, and the reconstruction
    ``g = h - 2 dtau^2`` with ``|dtau|_h = 1``."""
    pts = box.grid(n)
    for m in seq:
        if m.tau is None:
            raise ConvergenceError("every member needs a temporal function")
        x = m.phi(pts)
        if np.max(np.abs(lapse(m.g, m.tau, x) - 1.0)) > lapse_tol:
            raise ConvergenceError("members must be canonical (unit lapse); call canonicalize first")
    wick_norms, tau_norms, metric_norms = [], [], []

    def limit_fn(x):
        d = tau.d1(x)
        return h(x) - 2.0 * np.einsum("...i,...j->...ij", d, d)

    limit = MetricField(limit_fn, h.dim, signature="lorentzian", step=h.step, name="h-2dtau^2")
    for m in seq:
        wick_norms.append(ck_norm(difference(m.pulled_back_wick(), h), h, box, k, connection=h, n=n))
        tau_norms.append(scalar_ck_norm(function_difference(m.pulled_back_tau(), tau), h, box, k + 1, connection=h, n=n))
        metric_norms.append(ck_norm(difference(m.pulled_back(), limit), h, box, 0, n=n))
    unit = np.sqrt(np.einsum("...i,...ij,...j->...", tau.d1(pts), np.linalg.inv(h(pts)), tau.d1(pts)))
    out = {
        "wick_norms": wick_norms,
        "tau_norms": tau_norms,
        "metric_norms": metric_norms,
        "dtau_h_error": float(np.max(np.abs(unit - 1.0))),
        "limit_temporal": bool(np.all(gradient_norm(limit, tau, pts) < 0)),
    }
    if expected_limit is not None:
        out["reconstruction_error"] = float(np.max(np.abs(limit(pts) - expected_limit(pts))))
    # identity of the construction: Wick rotation of the reconstructed limit gives back h
    out["identity_error"] = float(np.max(np.abs(wick_matrix(limit(pts), tau.d1(pts)) - h(pts))))
    half_h = MetricField(lambda x: 0.5 * h(x), h.dim, signature="riemannian")
    sample = box.grid(steep_points)
    margins = [is_h_steep(limit, tau, half_h, p, resolution=360).margin for p in sample]
    out["steep_margin_half_h"] = float(min(margins))
    return out


def curvature_bound_report(metrics: Sequence[MetricField], box: Box, a_max: int = 1, n: int = 9,
                           ref: Optional[MetricField] = None, growth: float = 2.0, floor: float = 1e-6) -> dict:
    """Per-index grid suprema of ``|nabla^a Rm|`` (``a <= a_max``) measured with each member itself
    (or ``ref``). Trends below ``floor`` count as discretization noise. The
    injectivity-radius hypothesis is reported as not checked."""
    if a_max not in (0, 1):
        raise ConvergenceError("a_max must be 0 or 1")
    pts = box.grid(n)
    table = []
    for g in metrics:
        r = ref if ref is not None else g
        table.append([float(np.max(riemann_norm(g, r, pts, a))) for a in range(a_max + 1)])
    table = np.array(table)
    flags = []
    for a in range(a_max + 1):
        col = table[:, a]
        rising = (len(col) >= 3 and np.all(np.diff(col[-3:]) > 0) and col[-1] > floor
                  and col[-1] > growth * max(col[0], floor))
        flags.append(bool(rising))
    return {"sup_curvature": table.tolist(), "unbounded_trend": flags, "injectivity_radius": "NOT CHECKED"}
