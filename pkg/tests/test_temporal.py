import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzkit.chart import euclidean, minkowski
from lorentzkit.scenarios import build
from lorentzkit.temporal import (
    TemporalError,
    TemporalField,
    canonical_rep,
    coordinate_time,
    gradient_norm,
    gradient_tau,
    is_h_steep,
    is_steep,
    lapse,
    lemma_identities,
    null_vectors,
    observer_wick,
    split,
    steepness_sweep,
    weak_temporal_ratios,
    widen_cones,
    wick_matrix,
    wick_rotate,
)

pts = st.tuples(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))


def test_gradient_is_past_directed_timelike():
    g, tau = minkowski(2), coordinate_time(2)
    grad = gradient_tau(g, tau, [0.0, 0.0])
    assert np.allclose(grad, [-1.0, 0.0])


def test_spacelike_gradient_rejected():
    tau = TemporalField(lambda x: x[..., 1], 2)
    with pytest.raises(TemporalError):
        gradient_tau(minkowski(2), tau, [0.0, 0.0])


def test_lapse_of_scaled_time():
    # tau = 2t: g(grad, grad) = -4, lapse 1/4
    tau = coordinate_time(2, scale=2.0)
    assert gradient_norm(minkowski(2), tau, [0.0, 0.0]) == pytest.approx(-4.0)
    assert lapse(minkowski(2), tau, [0.0, 0.0]) == pytest.approx(0.25)
    G = canonical_rep(minkowski(2), tau, [0.0, 0.0])
    assert np.allclose(G, 4.0 * np.diag([-1.0, 1.0]))


@given(pts)
@settings(max_examples=20, deadline=None)
def test_wick_flips_gradient_direction(p):
    scen = build("grw")
    p = np.array(p)
    G = scen.g(p)
    d = scen.tau.d1(p)
    W = wick_matrix(G / lapse(scen.g, scen.tau, p), d)
    # the canonical unit gradient has W-length 1 and W agrees with g on its orthogonal complement
    Gc = G / lapse(scen.g, scen.tau, p)
    n = -np.linalg.solve(Gc, d)
    assert n @ W @ n == pytest.approx(1.0, rel=1e-12)
    e = np.array([0.0, 1.0])
    e = e - (e @ Gc @ n) / (n @ Gc @ n) * n
    assert e @ W @ e == pytest.approx(e @ Gc @ e, rel=1e-12)


def test_wick_conformal_invariance():
    g = build("grw").g
    tau = coordinate_time(2)
    scaled = type(g)(lambda x: 3.0 * g(x), 2)
    p = np.array([0.2, 0.1])
    assert np.allclose(wick_rotate(g, tau, p), wick_rotate(scaled, tau, p), atol=1e-13)


def test_observer_wick_requires_unit_field():
    g = minkowski(2)
    W = observer_wick(g, lambda x: np.broadcast_to([1.0, 0.0], x.shape))
    assert np.allclose(W([0.0, 0.0]), np.eye(2))
    bad = observer_wick(g, lambda x: np.broadcast_to([2.0, 0.0], x.shape))
    with pytest.raises(TemporalError):
        bad([0.0, 0.0])


def test_split_components_are_orthogonal():
    scen = build("grw")
    p = np.array([0.4, 0.2])
    v = np.array([1.0, 0.3])
    v_tau, v_perp = split(scen.g, scen.tau, p, v)
    G = scen.g(p)
    assert abs(v_tau @ G @ v_perp) < 1e-14
    assert np.allclose(v_tau + v_perp, v)


@given(pts, st.floats(0.1, 5.0))
@settings(max_examples=30, deadline=None)
def test_lemma_identities_on_grw(p, scale):
    scen = build("grw")
    p = np.array(p)
    v = scale * null_vectors(scen.g, scen.tau, p, np.array([[1.0], [-1.0]]))
    r1, r2 = lemma_identities(scen.g, scen.tau, np.stack([p, p]), v)
    assert np.max(r1) < 1e-12 and np.max(r2) < 1e-12


def test_lemma_identities_reject_timelike():
    with pytest.raises(ValueError):
        lemma_identities(minkowski(2), coordinate_time(2), [0.0, 0.0], [1.0, 0.2])


def test_steepness():
    g = minkowski(2)
    assert is_steep(g, coordinate_time(2), [0.0, 0.0], 1.0)
    assert not is_steep(g, coordinate_time(2, scale=0.5), [0.0, 0.0], 1.0)
    sweep = steepness_sweep(g, coordinate_time(2, scale=2.0), build("minkowski2d").box, 1.0)
    assert sweep["steep"] and sweep["inf"] == pytest.approx(4.0)


def test_h_steep_tight_on_flat_space():
    # dt(v) >= |v|_{h} with h = delta/2 is an equality on null vectors
    rep = is_h_steep(minkowski(2), coordinate_time(2), euclidean(2, 0.5), [0.0, 0.0])
    assert rep.status == "tight" and rep.h_steep
    rep3 = is_h_steep(minkowski(3), coordinate_time(3), euclidean(3, 0.5), [0.0, 0.0, 0.0])
    assert rep3.status == "tight"


def test_h_steep_fails_for_large_h():
    rep = is_h_steep(minkowski(2), coordinate_time(2), euclidean(2, 2.0), [0.0, 0.0])
    assert rep.status == "fail" and rep.margin < 0
    # the witness attains the reported margin
    assert rep.witness @ np.array([1.0, 0.0]) / math.sqrt(rep.witness @ (2 * rep.witness)) - 1 == pytest.approx(
        rep.margin, abs=1e-9)


def test_weak_temporal_ratio_bounds():
    lo, hi, C = weak_temporal_ratios(minkowski(2), coordinate_time(2), euclidean(2, 0.5), [0.0, 0.0])
    assert lo == pytest.approx(1.0, abs=1e-9)
    assert hi >= lo and C >= 1.0


def test_widen_cones_keeps_temporality():
    g = minkowski(2)
    wide = widen_cones(g, coordinate_time(2), lambda x: 0.5 * np.ones(x.shape[:-1]))
    assert gradient_norm(wide, coordinate_time(2), [0.0, 0.0]) < 0
    with pytest.raises(TemporalError):
        widen_cones(g, coordinate_time(2), lambda x: 2.0 * np.ones(x.shape[:-1]))([0.0, 0.0])
