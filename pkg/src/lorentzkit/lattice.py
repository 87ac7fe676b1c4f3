"""Lattice graphs over coordinate boxes and the three lattice distances.

Edges join nodes whose integer offset is primitive with max-norm at most the
stencil radius. Each edge carries its causal class (read off the chord at the
midpoint metric), the null weight ``|tau(head) - tau(tail)|`` and the Wick
weight (Wick length of the straight chord, never below the null weight).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, dijkstra

from .chart import Box, ChartError, MetricField
from .temporal import TemporalField, wick_matrix

EPS_CONE = 1e-6
KINDS = ("null", "wick", "nullwick")
CSV_COLUMNS = ("scenario", "kind", "p", "q", "spacing", "stencil", "value", "tau_p", "tau_q", "path_len_nodes")


class LatticeError(ChartError):
    pass


class BudgetError(LatticeError):
    pass


class OffLatticeError(LatticeError):
    """A query point is not a node of the lattice."""


class UnreachableError(LatticeError):
    pass


def max_nodes_budget() -> int:
    return int(float(os.environ.get("LORENTZKIT_MAX_NODES", 4_000_000)))


def stencil_offsets(dim: int, radius: int) -> np.ndarray:
    """Primitive integer offsets with max-norm in ``1..radius`` whose first nonzero entry is positive."""
    if radius < 1:
        raise LatticeError("stencil radius must be at least 1")
    rng = range(-radius, radius + 1)
    out = []
    for o in itertools.product(rng, repeat=dim):
        if not any(o) or math.gcd(*o) != 1:
            continue
        first = next(v for v in o if v != 0)
        if first > 0:
            out.append(o)
    return np.array(out, dtype=np.int64)


@dataclass
class Lattice:
    box: Box
    shape: tuple
    spacing: np.ndarray
    stencil: int
    periodic: tuple
    coords: np.ndarray  # (N, dim)
    tau: np.ndarray  # (N,)
    tail: np.ndarray  # edges of the half stencil
    head: np.ndarray
    causal: np.ndarray  # chord causal (either orientation)
    future: np.ndarray  # tail -> head is future directed
    null_ok: np.ndarray  # null-eligible
    null_weight: np.ndarray
    wick_weight: np.ndarray
    name: str = ""
    quadrature: str = "midpoint"
    strict: bool = False

    @property
    def num_nodes(self) -> int:
        return len(self.coords)

    @property
    def num_edges(self) -> int:
        return 2 * len(self.tail)

    def node(self, point, tol: float = 1e-9) -> int:
        """Index of the node at ``point``; raises if ``point`` is not a lattice node."""
        x = np.asarray(point, dtype=float)
        lo = np.asarray(self.box.lower)
        rel = (x - lo) / self.spacing
        idx = np.rint(rel).astype(np.int64)
        if np.any(np.abs(rel - idx) > tol / np.min(self.spacing) + 1e-9):
            raise OffLatticeError(f"point {_fmt_point(x)} is not a lattice node (spacing {_fmt_point(self.spacing)})")
        for a, per in enumerate(self.periodic):
            if per:
                idx[a] %= self.shape[a]
            elif not 0 <= idx[a] < self.shape[a]:
                raise OffLatticeError(f"point {_fmt_point(x)} lies outside the lattice box")
        return int(np.ravel_multi_index(tuple(idx), self.shape))

    def _graph(self, mask: np.ndarray, weight: np.ndarray) -> csr_matrix:
        i = np.concatenate([self.tail[mask], self.head[mask]])
        j = np.concatenate([self.head[mask], self.tail[mask]])
        w = np.concatenate([weight[mask], weight[mask]])
        return _min_csr(i, j, w, self.num_nodes)

    @cached_property
    def null_graph(self) -> csr_matrix:
        return self._graph(self.causal, self.null_weight)

    @cached_property
    def wick_graph(self) -> csr_matrix:
        return self._graph(np.ones(len(self.tail), dtype=bool), self.wick_weight)

    @cached_property
    def nullwick_graph(self) -> csr_matrix:
        return self._graph(self.null_ok, self.wick_weight)

    @cached_property
    def future_graph(self) -> csr_matrix:
        """Directed graph of future-causal edges (unit weights)."""
        fwd = self.causal & self.future
        bwd = self.causal & ~self.future
        i = np.concatenate([self.tail[fwd], self.head[bwd]])
        j = np.concatenate([self.head[fwd], self.tail[bwd]])
        return _min_csr(i, j, np.ones(len(i)), self.num_nodes)

    def graph(self, kind: str) -> csr_matrix:
        if kind not in KINDS:
            raise LatticeError(f"unknown distance kind {kind!r}; choose from {KINDS}")
        return {"null": self.null_graph, "wick": self.wick_graph, "nullwick": self.nullwick_graph}[kind]


def _min_csr(i, j, w, n) -> csr_matrix:
    """CSR matrix keeping the minimum weight among duplicate (i, j) pairs; explicit zeros are kept."""
    keep = i != j
    i, j, w = i[keep], j[keep], w[keep]
    key = i * n + j
    order = np.lexsort((w, key))
    key, w = key[order], w[order]
    first = np.ones(len(key), dtype=bool)
    first[1:] = key[1:] != key[:-1]
    key, w = key[first], w[first]
    rows, cols = np.divmod(key, n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    return csr_matrix((w, cols, np.cumsum(indptr)), shape=(n, n))


def build_lattice(g: MetricField, tau: TemporalField, box: Box, spacing, stencil: int = 3,
                  wick: Optional[MetricField] = None, periodic: Optional[Sequence[bool]] = None,
                  quadrature: str = "midpoint", strict: bool = False, eps_cone: float = EPS_CONE,
                  name: str = "") -> Lattice:
    """Classify and weight every stencil edge of the grid over ``box``.

    ``periodic`` axes wrap with period ``upper - lower``; their spacing is
    adjusted to divide the period. ``quadrature`` is ``"midpoint"`` or
    ``"simpson"`` for the Wick chord length. ``strict`` additionally requires
    causal edges to be causal at both endpoints.
    """
    dim = g.dim
    if box.dim != dim:
        raise LatticeError("box and metric dimensions differ")
    if quadrature not in ("midpoint", "simpson"):
        raise LatticeError(f"unknown quadrature {quadrature!r}")
    periodic = tuple(periodic) if periodic is not None else tuple(g.periodic)
    hs = np.broadcast_to(np.asarray(spacing, dtype=float), (dim,)).copy()
    if np.any(hs <= 0):
        raise LatticeError("spacing must be positive")
    lo = np.asarray(box.lower)
    width = np.asarray(box.upper) - lo
    shape = []
    for a in range(dim):
        if periodic[a]:
            n = max(3, int(round(width[a] / hs[a])))
            hs[a] = width[a] / n
        else:
            n = int(math.floor(width[a] / hs[a] + 1e-9)) + 1
        shape.append(n)
    shape = tuple(shape)
    total = int(np.prod(shape))
    if total < 2:
        raise LatticeError("lattice box is empty at this spacing")
    if total > max_nodes_budget():
        raise BudgetError(f"{total} nodes exceed the budget of {max_nodes_budget()} (LORENTZKIT_MAX_NODES)")

    grid_idx = np.stack(np.unravel_index(np.arange(total), shape), axis=-1)
    coords = lo + grid_idx * hs
    tau_nodes = tau(coords)

    tails, heads, chords, mids = [], [], [], []
    for off in stencil_offsets(dim, stencil):
        tgt = grid_idx + off
        ok = np.ones(total, dtype=bool)
        for a in range(dim):
            if periodic[a]:
                tgt[:, a] %= shape[a]
            else:
                ok &= (tgt[:, a] >= 0) & (tgt[:, a] < shape[a])
        if not ok.any():
            continue
        src = np.nonzero(ok)[0]
        tails.append(src)
        heads.append(np.ravel_multi_index(tuple(tgt[ok].T), shape))
        c = off * hs
        chords.append(np.broadcast_to(c, (len(src), dim)))
        mids.append(coords[src] + 0.5 * c)
    if not tails:
        raise LatticeError("no edges fit in the box; enlarge the box or reduce the spacing")
    tail = np.concatenate(tails)
    head = np.concatenate(heads)
    chord = np.concatenate(chords)
    mid = np.concatenate(mids)

    def quad_forms(points):
        G = g(points)
        if wick is not None:
            W = wick(points)
        else:
            W = wick_matrix(G, tau.d1(points))
        qg = np.einsum("ki,kij,kj->k", chord, G, chord)
        qw = np.einsum("ki,kij,kj->k", chord, W, chord)
        return qg, qw

    qg, qw = quad_forms(mid)
    if np.any(~(qw > 0)):
        raise LatticeError("Wick-rotated metric is not positive on some chord")
    causal = qg <= eps_cone * qw
    null_ok = np.abs(qg) <= eps_cone * qw
    if quadrature == "simpson" or strict:
        start = coords[tail]
        qg0, qw0 = quad_forms(start)
        qg1, qw1 = quad_forms(start + chord)
        if strict:
            causal &= (qg0 <= eps_cone * qw0) & (qg1 <= eps_cone * qw1)
            null_ok &= (np.abs(qg0) <= eps_cone * qw0) & (np.abs(qg1) <= eps_cone * qw1)
    if quadrature == "simpson":
        length = (np.sqrt(qw0) + 4.0 * np.sqrt(qw) + np.sqrt(qw1)) / 6.0
    else:
        length = np.sqrt(qw)
    future = np.einsum("ki,ki->k", tau.d1(mid), chord) > 0
    null_weight = np.abs(tau_nodes[head] - tau_nodes[tail])
    wick_weight = np.maximum(length, null_weight)
    return Lattice(box=box, shape=shape, spacing=hs, stencil=stencil, periodic=periodic, coords=coords,
                   tau=tau_nodes, tail=tail, head=head, causal=causal, future=future, null_ok=null_ok,
                   null_weight=null_weight, wick_weight=wick_weight, name=name or g.name,
                   quadrature=quadrature, strict=strict)


def lattice_for(scenario, spacing, stencil: int = 3, box: Optional[Box] = None, **kw) -> Lattice:
    """Lattice over a scenario, using its analytic Wick field when it has one."""
    return build_lattice(scenario.g, scenario.tau, box or scenario.box, spacing, stencil,
                         wick=scenario.wick, name=scenario.name, **kw)


@dataclass
class DistanceResult:
    value: float
    path: np.ndarray  # node coordinates along the realizing polyline
    nodes: np.ndarray
    kind: str
    spacing: tuple
    stencil: int
    segment_weights: np.ndarray
    tau_p: float
    tau_q: float
    scenario: str = ""
    history: list = field(default_factory=list)

    @property
    def path_len_nodes(self) -> int:
        return len(self.nodes)

    def record(self) -> dict:
        return {
            "scenario": self.scenario,
            "kind": self.kind,
            "p": _fmt_point(self.path[0]),
            "q": _fmt_point(self.path[-1]),
            "spacing": _fmt_point(self.spacing),
            "stencil": self.stencil,
            "value": repr(float(self.value)),
            "tau_p": repr(float(self.tau_p)),
            "tau_q": repr(float(self.tau_q)),
            "path_len_nodes": self.path_len_nodes,
        }


def _fmt_point(x) -> str:
    return ",".join(repr(round(float(v), 12)) for v in np.atleast_1d(x))


def _edge_weight_lookup(graph: csr_matrix, a: int, b: int) -> float:
    row = slice(graph.indptr[a], graph.indptr[a + 1])
    hit = np.nonzero(graph.indices[row] == b)[0]
    return float(graph.data[row][hit[0]])


def shortest_paths(lat: Lattice, kind: str, sources) -> tuple:
    """Distance and predecessor arrays from each source (one row per source)."""
    return dijkstra(lat.graph(kind), directed=True, indices=np.atleast_1d(sources), return_predecessors=True)


def lattice_distance(lat: Lattice, p, q, kind: str) -> DistanceResult:
    a, b = lat.node(p), lat.node(q)
    graph = lat.graph(kind)
    dist, pred = dijkstra(graph, directed=True, indices=a, return_predecessors=True)
    if not np.isfinite(dist[b]):
        hint = " ; increase the stencil radius" if kind == "nullwick" else ""
        raise UnreachableError(f"{_fmt_point(q)} is unreachable from {_fmt_point(p)} in the {kind} graph{hint}")
    nodes = [b]
    while nodes[-1] != a:
        nodes.append(int(pred[nodes[-1]]))
    nodes = np.array(nodes[::-1], dtype=np.int64)
    seg = np.array([_edge_weight_lookup(graph, u, v) for u, v in zip(nodes[:-1], nodes[1:])])
    value = float(np.sum(seg)) if len(seg) else 0.0
    return DistanceResult(value=value, path=lat.coords[nodes], nodes=nodes, kind=kind,
                          spacing=tuple(float(h) for h in lat.spacing), stencil=lat.stencil, segment_weights=seg,
                          tau_p=float(lat.tau[a]), tau_q=float(lat.tau[b]), scenario=lat.name)


def null_distance(lat: Lattice, p, q) -> DistanceResult:
    """Infimum of the summed ``|delta tau|`` over lattice polylines with causal pieces."""
    return lattice_distance(lat, p, q, "null")


def wick_distance(lat: Lattice, p, q) -> DistanceResult:
    return lattice_distance(lat, p, q, "wick")


def null_wick_distance(lat: Lattice, p, q) -> DistanceResult:
    """Wick length infimum over lattice polylines made of null pieces."""
    return lattice_distance(lat, p, q, "nullwick")


def distance_matrix(lat: Lattice, nodes: Sequence[int], kind: str) -> np.ndarray:
    """Pairwise lattice distances among ``nodes`` (node indices)."""
    dist = dijkstra(lat.graph(kind), directed=True, indices=np.asarray(nodes))
    return dist[:, np.asarray(nodes)]


def lattice_reach(lat: Lattice, p) -> np.ndarray:
    """Node indices reachable from ``p`` through future-causal edges (sorted)."""
    start = lat.node(p)
    order = breadth_first_order(lat.future_graph, start, directed=True, return_predecessors=False)
    return np.sort(order)


def path_null_length(tau: TemporalField, polyline, g: Optional[MetricField] = None, samples: int = 8,
                     eps: float = EPS_CONE):
    """Sum of ``|delta tau|`` over the break points of a polyline.

    With ``g`` given, each piece is sampled at interior points and flagged when
    it fails to be causal there or when ``tau`` is not monotone along it.
    Returns ``(length, flags)`` where ``flags`` lists offending piece indices.
    """
    pts = np.asarray(polyline, dtype=float)
    taus = tau(pts)
    length = float(np.sum(np.abs(np.diff(taus))))
    flags = []
    if g is not None:
        s = (np.arange(samples) + 0.5) / samples
        for k, (a, b) in enumerate(zip(pts[:-1], pts[1:])):
            c = b - a
            inner = a + s[:, None] * c
            qg = np.einsum("i,kij,j->k", c, g(inner), c)
            slope = tau.d1(inner) @ c
            if np.any(qg > eps * float(c @ c)) or not (np.all(slope >= 0) or np.all(slope <= 0)):
                flags.append(k)
    return length, flags


def encodes_causality(lat: Lattice, p, q, reach=None, rel_tol: float = 1e-9) -> dict:
    """Compare the null distance with ``tau(q) - tau(p)`` and the Wick distance with ``sqrt 2`` times it.

    ``reach`` is an exact oracle (an object with ``contains``); without it the
    lattice closure decides causality (advisory only).
    """
    if reach is not None:
        causal, certified = bool(reach.contains(q)), True
    else:
        causal, certified = bool(lat.node(q) in set(lattice_reach(lat, p).tolist())), False
    dn = null_distance(lat, p, q)
    dw = wick_distance(lat, p, q)
    dtau = dn.tau_q - dn.tau_p
    encoded = abs(dn.value - dtau) <= rel_tol * max(1.0, abs(dtau))
    return {
        "causal": causal,
        "certified": certified,
        "null_distance": dn.value,
        "delta_tau": dtau,
        "null_residual": dn.value - dtau,
        "null_encodes": encoded == causal,
        "wick_distance": dw.value,
        "sqrt2_delta_tau": math.sqrt(2.0) * dtau,
        "wick_below_sqrt2": dw.value < math.sqrt(2.0) * dtau,
    }


def refine_study(scenario, p, q, kind: str, spacings: Iterable[float], stencils: Iterable[int],
                 box: Optional[Box] = None, **kw) -> list:
    """Distances for each (spacing, stencil); each row records whether R-monotonicity held so far."""
    rows = []
    for h in spacings:
        prev = math.inf
        for R in sorted(stencils):
            lat = lattice_for(scenario, h, R, box=box, **kw)
            d = lattice_distance(lat, p, q, kind)
            rows.append({"spacing": float(h), "stencil": R, "value": d.value, "nodes": lat.num_nodes,
                         "monotone": d.value <= prev + 1e-12})
            prev = d.value
    return rows


def write_records(records: Sequence[dict], fmt: str = "csv") -> str:
    """Serialize distance records with the fixed column order."""
    if fmt == "json":
        return json.dumps([{k: r[k] for k in CSV_COLUMNS} for r in records], indent=2) + "\n"
    if fmt != "csv":
        raise LatticeError(f"unknown output format {fmt!r}")
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: r[k] for k in CSV_COLUMNS})
    return buf.getvalue()
