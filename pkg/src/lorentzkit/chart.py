"""Coordinate charts, metric fields, jets, Christoffel symbols and curvature.

Every field in this package is evaluated on a single coordinate patch. Field
callables are vectorized: they take points of shape ``(..., dim)`` and return
arrays of shape ``(..., dim, dim)``. Derivative indices are always appended
last, so ``d1[..., i, j, c] = d_c g_ij`` and ``d2[..., i, j, c, d] = d_c d_d g_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

FD_STEP = 1e-4
SYMMETRY_TOL = 1e-12


class ChartError(ValueError):
    """A point or field violates a chart-level precondition."""


class DomainError(ChartError):
    pass


class SignatureError(ChartError):
    pass


@dataclass(frozen=True)
class Box:
    """Axis-aligned compact coordinate box ``lower <= x <= upper``."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ChartError("box corners must be 1-d and of equal length")
        if not np.all(lo < hi):
            raise ChartError(f"box requires lower < upper componentwise, got {lo} / {hi}")
        object.__setattr__(self, "lower", tuple(float(v) for v in lo))
        object.__setattr__(self, "upper", tuple(float(v) for v in hi))

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, x, periodic=None, tol: float = 1e-12) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        ok = (x >= lo - tol) & (x <= hi + tol)
        if periodic is not None:
            ok = ok | np.asarray(periodic, dtype=bool)
        return np.all(ok, axis=-1)

    def grid(self, n: int | Sequence[int] = 41) -> np.ndarray:
        """Tensor grid of points, shape ``(N, dim)``."""
        ns = [n] * self.dim if np.isscalar(n) else list(n)
        axes = [np.linspace(a, b, m) for a, b, m in zip(self.lower, self.upper, ns)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        return lo + (hi - lo) * rng.random((n, self.dim))


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != dim:
        raise ChartError(f"expected points with {dim} coordinates, got shape {x.shape}")
    return x


def central_diff(func: Callable, x: np.ndarray, h: float) -> np.ndarray:
    """Central first differences of ``func`` along every coordinate, appended last."""
    dim = x.shape[-1]
    cols = []
    for c in range(dim):
        e = np.zeros(dim)
        e[c] = h
        cols.append((func(x + e) - func(x - e)) / (2.0 * h))
    return np.stack(cols, axis=-1)


def second_diff(func: Callable, x: np.ndarray, h: float) -> np.ndarray:
    """Central second differences of ``func``; shape ``func(x).shape + (dim, dim)``."""
    dim = x.shape[-1]
    f0 = func(x)
    out = np.empty(f0.shape + (dim, dim))
    for c in range(dim):
        ec = np.zeros(dim)
        ec[c] = h
        out[..., c, c] = (func(x + ec) - 2.0 * f0 + func(x - ec)) / h**2
        for d in range(c + 1, dim):
            ed = np.zeros(dim)
            ed[d] = h
            v = (func(x + ec + ed) - func(x + ec - ed) - func(x - ec + ed) + func(x - ec - ed)) / (4 * h * h)
            out[..., c, d] = v
            out[..., d, c] = v
    return out


class MetricField:
    """Smooth symmetric 2-tensor field on a chart.

    ``signature`` is ``"lorentzian"``, ``"riemannian"`` or ``None`` (a plain
    symmetric tensor field such as a metric difference). Analytic first and
    second partials are optional; missing orders fall back to central
    differences with step ``step`` (second partials are differenced from the
    analytic first partials when those exist).
    """

    def __init__(
        self,
        func: Callable[[np.ndarray], np.ndarray],
        dim: int,
        d1: Optional[Callable] = None,
        d2: Optional[Callable] = None,
        signature: Optional[str] = "lorentzian",
        domain: Optional[Box] = None,
        periodic: Optional[Sequence[bool]] = None,
        step: float = FD_STEP,
        name: str = "",
    ):
        if signature not in ("lorentzian", "riemannian", None):
            raise ChartError(f"unknown signature {signature!r}")
        if step <= 0:
            raise ChartError("finite-difference step must be positive")
        self.func = func
        self.dim = int(dim)
        self._d1 = d1
        self._d2 = d2
        self.signature = signature
        self.domain = domain
        self.periodic = tuple(periodic) if periodic is not None else (False,) * self.dim
        self.step = step
        self.name = name

    def __repr__(self):
        return f"MetricField({self.name or 'anonymous'}, dim={self.dim}, signature={self.signature})"

    @property
    def analytic_order(self) -> int:
        if self._d1 is None:
            return 0
        return 2 if self._d2 is not None else 1

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

    def inverse(self, x) -> np.ndarray:
        return np.linalg.inv(self(x))

    def with_name(self, name: str) -> "MetricField":
        return MetricField(self.func, self.dim, self._d1, self._d2, self.signature,
                           self.domain, self.periodic, self.step, name)


@dataclass
class Jet:
    point: np.ndarray
    partials: list = field(default_factory=list)  # partials[r] has r trailing derivative axes

    @property
    def order(self) -> int:
        return len(self.partials) - 1


def _sign_counts(G: np.ndarray, rel_tol: float = 1e-12):
    w = np.linalg.eigvalsh(G)
    scale = np.max(np.abs(w), axis=-1, keepdims=True)
    neg = np.sum(w < -rel_tol * scale, axis=-1)
    pos = np.sum(w > rel_tol * scale, axis=-1)
    return neg, pos


def check_signature(field_: MetricField, G: np.ndarray) -> None:
    asym = np.max(np.abs(G - np.swapaxes(G, -1, -2)))
    scale = max(1.0, float(np.max(np.abs(G))))
    if asym > SYMMETRY_TOL * scale:
        raise SignatureError(f"metric not symmetric (residual {asym:.3e})")
    if field_.signature is None:
        return
    neg, pos = _sign_counts(G)
    n = field_.dim
    if field_.signature == "lorentzian":
        ok = (neg == 1) & (pos == n - 1)
    else:
        ok = (neg == 0) & (pos == n)
    if not np.all(ok):
        raise SignatureError(f"{field_!r} lost its {field_.signature} signature at a sampled point")


def eval_metric(field_: MetricField, p) -> np.ndarray:
    """Evaluate with domain, finiteness, symmetry and signature checks."""
    p = _as_points(p, field_.dim)
    if field_.domain is not None and not np.all(field_.domain.contains(p, field_.periodic)):
        raise DomainError(f"point {p} outside the domain of {field_!r}")
    G = field_(p)
    if not np.all(np.isfinite(G)):
        raise ChartError(f"non-finite metric entries at {p}")
    check_signature(field_, G)
    return G


def jet(field_: MetricField, p, k: int) -> Jet:
    """Metric partials of orders ``0..k`` (analytic where available)."""
    if k < 0 or k > 2:
        raise ChartError("jets are supported up to order 2")
    p = _as_points(p, field_.dim)
    if k > field_.analytic_order and field_.domain is not None:
        reach = (k - field_.analytic_order) * field_.step
        lo = np.asarray(field_.domain.lower) + reach
        hi = np.asarray(field_.domain.upper) - reach
        inside = (p >= lo) & (p <= hi) | np.asarray(field_.periodic)
        if not np.all(inside):
            raise DomainError("finite-difference stencil exits the domain")
    parts = [field_(p)]
    if k >= 1:
        parts.append(field_.d1(p))
    if k >= 2:
        parts.append(field_.d2(p))
    return Jet(point=p, partials=parts)


def christoffel(field_: MetricField, p, G=None, dG=None) -> np.ndarray:
    """``Gamma[..., k, i, j]`` of the Levi-Civita connection."""
    p = _as_points(p, field_.dim)
    G = field_(p) if G is None else G
    dG = field_.d1(p) if dG is None else dG
    if np.any(np.abs(np.linalg.det(G)) < 1e-300):
        raise ChartError("metric singular; Christoffel symbols undefined")
    Ginv = np.linalg.inv(G)
    # S[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    S = np.einsum("...jli->...lij", dG) + np.einsum("...ilj->...lij", dG) - np.einsum("...ijl->...lij", dG)
    Gam = 0.5 * np.einsum("...kl,...lij->...kij", Ginv, S)
    return 0.5 * (Gam + np.swapaxes(Gam, -1, -2))


def christoffel_d1(field_: MetricField, p):
    """Christoffel symbols and their partials ``dGamma[..., k, i, j, d]``."""
    p = _as_points(p, field_.dim)
    G = field_(p)
    dG = field_.d1(p)
    ddG = field_.d2(p)
    Ginv = np.linalg.inv(G)
    S = np.einsum("...jli->...lij", dG) + np.einsum("...ilj->...lij", dG) - np.einsum("...ijl->...lij", dG)
    dS = (np.einsum("...jlid->...lijd", ddG) + np.einsum("...iljd->...lijd", ddG)
          - np.einsum("...ijld->...lijd", ddG))
    dGinv = -np.einsum("...ka,...abd,...bl->...kld", Ginv, dG, Ginv)
    Gam = 0.5 * np.einsum("...kl,...lij->...kij", Ginv, S)
    dGam = 0.5 * (np.einsum("...kld,...lij->...kijd", dGinv, S) + np.einsum("...kl,...lijd->...kijd", Ginv, dS))
    return Gam, dGam


def riemann_lowered(field_: MetricField, p) -> np.ndarray:
    """``R[..., a, b, c, d] = g_ae R^e_bcd`` with R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z."""
    p = _as_points(p, field_.dim)
    G = field_(p)
    Gam, dGam = christoffel_d1(field_, p)
    # R^a_bcd = d_c Gam^a_db - d_d Gam^a_cb + Gam^a_ce Gam^e_db - Gam^a_de Gam^e_cb
    Rup = (np.einsum("...adbc->...abcd", dGam) - np.einsum("...acbd->...abcd", dGam)
           + np.einsum("...ace,...edb->...abcd", Gam, Gam) - np.einsum("...ade,...ecb->...abcd", Gam, Gam))
    return np.einsum("...ae,...ebcd->...abcd", G, Rup)


def tensor_norm(T: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Pointwise norm of a covariant tensor ``T[..., a1..am]`` under metric ``H[..., i, j]``."""
    Hinv = np.linalg.inv(H)
    rank = T.ndim - H.ndim + 2
    up = T
    for s in range(rank):
        up = _raise_slot(Hinv, up, s, rank)
    sq = np.sum((T * up).reshape(T.shape[: T.ndim - rank] + (-1,)), axis=-1)
    return np.sqrt(np.maximum(sq, 0.0))


def _raise_slot(Hinv: np.ndarray, T: np.ndarray, slot: int, rank: int) -> np.ndarray:
    letters = "abcdefgh"[:rank]
    src = letters
    dst = letters[:slot] + "z" + letters[slot + 1:]
    return np.einsum(f"...z{letters[slot]},...{src}->...{dst}", Hinv, T)


def riemann_norm(field_: MetricField, ref: MetricField, p, a: int = 0) -> np.ndarray:
    """``|nabla^a Rm|`` measured with the Riemannian metric ``ref`` (a in {0, 1})."""
    if a not in (0, 1):
        raise ChartError("only derivative orders a = 0, 1 are supported")
    p = _as_points(p, field_.dim)
    H = ref(p)
    if a == 0:
        return tensor_norm(riemann_lowered(field_, p), H)
    h = field_.step * 10
    R = riemann_lowered(field_, p)
    curv = lambda y: riemann_lowered(field_, y)  # noqa: E731
    # Richardson extrapolation of the central difference
    dR = (4.0 * central_diff(curv, p, h / 2) - central_diff(curv, p, h)) / 3.0
    Gam = christoffel(field_, p)
    nabla = covariant_derivative(R, dR, Gam)
    return tensor_norm(nabla, H)


def covariant_derivative(T: np.ndarray, dT: np.ndarray, Gam: np.ndarray) -> np.ndarray:
    """``(nabla T)[..., a1..am, c]`` from values, partials (last axis) and ``Gamma[k,i,j]``."""
    rank = T.ndim - Gam.ndim + 3
    out = dT.copy()
    letters = "abcd"[:rank]
    for s in range(rank):
        src = letters[:s] + "e" + letters[s + 1:]
        out = out - np.einsum(f"...ez{letters[s]},...{src}->...{letters}z", Gam, T)
    return out


def covariant_derivative_d1(T, dT, d2T, Gam, dGam):
    """Partials ``d_d (nabla T)`` given jets of T and of the connection."""
    rank = T.ndim - Gam.ndim + 3
    letters = "abcd"[:rank]
    out = d2T.copy()  # [..., letters, z(c), y(d)]
    for s in range(rank):
        src = letters[:s] + "e" + letters[s + 1:]
        out = out - np.einsum(f"...ez{letters[s]}y,...{src}->...{letters}zy", dGam, T)
        out = out - np.einsum(f"...ez{letters[s]},...{src}y->...{letters}zy", Gam, dT)
    return out


def lower_index(G: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", G, v)


def raise_index(G: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.linalg.solve(G, w[..., None])[..., 0]


def orthonormal_frame(G: np.ndarray, first: Optional[np.ndarray] = None) -> np.ndarray:
    """Columns form a G-orthonormal basis; timelike vectors first.

    ``first`` (optional) is normalized and used as the first basis vector.
    """
    n = G.shape[-1]
    cands = [] if first is None else [np.asarray(first, dtype=float)]
    if first is None:
        w, V = np.linalg.eigh(G)
        cands = [V[:, i] for i in np.argsort(w)]
    else:
        cands += [np.eye(n)[:, i] for i in range(n)]
    basis, signs = [], []
    for v in cands:
        u = v.copy()
        for b, s in zip(basis, signs):
            u = u - s * (b @ G @ u) * b
        nrm = u @ G @ u
        if abs(nrm) < 1e-10 * max(1.0, float(v @ v)):
            continue
        basis.append(u / np.sqrt(abs(nrm)))
        signs.append(np.sign(nrm))
        if len(basis) == n:
            break
    order = np.argsort(signs, kind="stable")
    return np.stack([basis[i] for i in order], axis=1)


def minkowski(dim: int = 2) -> MetricField:
    eta = np.diag([-1.0] + [1.0] * (dim - 1))

    def g(x):
        return np.broadcast_to(eta, x.shape[:-1] + (dim, dim)).copy()

    def d1(x):
        return np.zeros(x.shape[:-1] + (dim,) * 3)

    def d2(x):
        return np.zeros(x.shape[:-1] + (dim,) * 4)

    return MetricField(g, dim, d1, d2, "lorentzian", name=f"minkowski{dim}d")


def euclidean(dim: int = 2, scale: float = 1.0) -> MetricField:
    eye = scale * np.eye(dim)

    def g(x):
        return np.broadcast_to(eye, x.shape[:-1] + (dim, dim)).copy()

    def d1(x):
        return np.zeros(x.shape[:-1] + (dim,) * 3)

    def d2(x):
        return np.zeros(x.shape[:-1] + (dim,) * 4)

    return MetricField(g, dim, d1, d2, "riemannian", name="euclidean")


def round_sphere(radius: float = 1.0) -> MetricField:
    """Round 2-sphere in polar chart ``(theta, phi)``: ``r^2 (dtheta^2 + sin^2 theta dphi^2)``."""
    r2 = radius**2

    def g(x):
        s = np.sin(x[..., 0])
        out = np.zeros(x.shape[:-1] + (2, 2))
        out[..., 0, 0] = r2
        out[..., 1, 1] = r2 * s * s
        return out

    def d1(x):
        th = x[..., 0]
        out = np.zeros(x.shape[:-1] + (2, 2, 2))
        out[..., 1, 1, 0] = r2 * np.sin(2 * th)
        return out

    def d2(x):
        th = x[..., 0]
        out = np.zeros(x.shape[:-1] + (2, 2, 2, 2))
        out[..., 1, 1, 0, 0] = 2 * r2 * np.cos(2 * th)
        return out

    return MetricField(g, 2, d1, d2, "riemannian", domain=Box((1e-6, -np.inf), (np.pi - 1e-6, np.inf)),
                       name=f"sphere(r={radius})")


def warped_product(f, df, d2f, d3f=None, sign: float = -1.0, fiber_dim: int = 1, name: str = "grw") -> MetricField:
    """``sign dt^2 + f(t)^2 (dx_1^2 + ... )`` with analytic partials up to order 2."""
    dim = fiber_dim + 1
    signature = "lorentzian" if sign < 0 else "riemannian"

    def g(x):
        t = x[..., 0]
        out = np.zeros(x.shape[:-1] + (dim, dim))
        out[..., 0, 0] = sign
        ff = f(t) ** 2
        for a in range(1, dim):
            out[..., a, a] = ff
        return out

    def d1(x):
        t = x[..., 0]
        out = np.zeros(x.shape[:-1] + (dim,) * 3)
        v = 2 * f(t) * df(t)
        for a in range(1, dim):
            out[..., a, a, 0] = v
        return out

    def d2(x):
        t = x[..., 0]
        out = np.zeros(x.shape[:-1] + (dim,) * 4)
        v = 2 * (df(t) ** 2 + f(t) * d2f(t))
        for a in range(1, dim):
            out[..., a, a, 0, 0] = v
        return out

    return MetricField(g, dim, d1, d2, signature, name=name)


def warped_over(f, df, d2f, fiber: MetricField, sign: float = -1.0, name: str = "warped") -> MetricField:
    """``sign dt^2 + f(t)^2 sigma(y)`` for a Riemannian fiber metric ``sigma`` with analytic jets."""
    m = fiber.dim
    dim = m + 1
    signature = "lorentzian" if sign < 0 else "riemannian"

    def g(x):
        out = np.zeros(x.shape[:-1] + (dim, dim))
        out[..., 0, 0] = sign
        out[..., 1:, 1:] = (f(x[..., 0]) ** 2)[..., None, None] * fiber(x[..., 1:])
        return out

    def d1(x):
        t, y = x[..., 0], x[..., 1:]
        out = np.zeros(x.shape[:-1] + (dim,) * 3)
        out[..., 1:, 1:, 0] = (2 * f(t) * df(t))[..., None, None] * fiber(y)
        out[..., 1:, 1:, 1:] = (f(t) ** 2)[..., None, None, None] * fiber.d1(y)
        return out

    def d2(x):
        t, y = x[..., 0], x[..., 1:]
        out = np.zeros(x.shape[:-1] + (dim,) * 4)
        out[..., 1:, 1:, 0, 0] = (2 * (df(t) ** 2 + f(t) * d2f(t)))[..., None, None] * fiber(y)
        mixed = (2 * f(t) * df(t))[..., None, None, None] * fiber.d1(y)
        out[..., 1:, 1:, 0, 1:] = mixed
        out[..., 1:, 1:, 1:, 0] = mixed
        out[..., 1:, 1:, 1:, 1:] = (f(t) ** 2)[..., None, None, None, None] * fiber.d2(y)
        return out

    domain = None
    if fiber.domain is not None:
        domain = Box((-np.inf,) + fiber.domain.lower, (np.inf,) + fiber.domain.upper)
    return MetricField(g, dim, d1, d2, signature, domain=domain, periodic=(False,) + fiber.periodic,
                       name=name)


def circle(radius: float = 1.0) -> MetricField:
    """Unit-speed angular chart of a circle, periodic with period ``2 pi``."""
    fld = euclidean(1, radius**2)
    return MetricField(fld.func, 1, fld._d1, fld._d2, "riemannian", periodic=(True,), name="circle")
