import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzkit.chart import DomainError, euclidean, minkowski, round_sphere
from lorentzkit.geodesic import (
    Curve,
    Frame,
    GeodesicError,
    anchored_metric,
    exp_map,
    frame_align,
    geodesic,
    latitude_holonomy,
    log_map,
    parallel_transport,
)
from lorentzkit.scenarios import build


def test_flat_geodesics_are_lines():
    c = geodesic(minkowski(2), [0.0, 0.0], [1.0, 0.5], 2.0)
    assert np.allclose(c.end, [2.0, 1.0], atol=1e-12)


def test_great_circle_on_sphere():
    # the equator is a geodesic traversed at unit speed
    c = geodesic(round_sphere(), [math.pi / 2, 0.0], [0.0, 1.0], 3.0)
    assert np.allclose(c.end, [math.pi / 2, 3.0], atol=1e-10)
    assert c.energy_drift < 1e-10


def test_energy_conserved_on_grw():
    c = geodesic(build("grw").g, [0.0, 0.0], [1.0, 0.4], 10.0)
    assert c.energy_drift < 1e-8


def test_leaving_the_domain_raises():
    with pytest.raises(DomainError):
        geodesic(round_sphere(), [0.2, 0.0], [-1.0, 0.0], 1.0)


def test_step_floor(monkeypatch):
    monkeypatch.setenv("LORENTZKIT_MIN_STEP", "10")
    with pytest.raises(GeodesicError):
        geodesic(build("grw").g, [0.0, 0.0], [1.0, 0.4], 5.0)


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
@settings(max_examples=10, deadline=None)
def test_log_inverts_exp(a, b):
    g = build("de-sitter", i=0).g
    p = np.array([0.1, 1.0])
    v = np.array([a, b])
    assert np.allclose(log_map(g, p, exp_map(g, p, v)), v, atol=1e-8)


def test_transport_preserves_gram():
    g = build("de-sitter", i=0).g
    frame = Frame.orthonormal(g, np.array([0.0, 0.0]))
    curve = Curve(lambda s: np.array([0.4 * math.sin(s), s]), lambda s: np.array([0.4 * math.cos(s), 1.0]), 0.0, 5.0)
    assert parallel_transport(g, curve, frame).gram_residual(g) < 1e-9


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
def test_latitude_holonomy(theta):
    expected = np.mod(2 * math.pi * (1 - math.cos(theta)), 2 * math.pi)
    assert latitude_holonomy(theta) == pytest.approx(expected, abs=1e-8)


def test_anchored_metric_is_identity_on_flat_space():
    g = minkowski(2)
    A = anchored_metric(g, Frame.orthonormal(g, np.zeros(2)), 1.0)
    assert np.allclose(A(np.array([[0.3, -0.2], [0.0, 0.5]])), np.eye(2), atol=1e-9)
    with pytest.raises(DomainError):
        A([2.0, 0.0])
    assert A.probe_radius(4) < 1e-7


def test_anchored_metric_matches_center_frame():
    g = build("grw").g
    frame = Frame.orthonormal(g, np.zeros(2))
    A = anchored_metric(g, frame, 0.5)
    E = frame.basis
    assert np.allclose(A(np.zeros(2)), np.linalg.inv(E @ E.T), atol=1e-12)


def test_frame_align():
    R = np.array([[math.cos(0.4), -math.sin(0.4)], [math.sin(0.4), math.cos(0.4)]])
    A = np.eye(3)
    A[1:, 1:] = R
    A[0, 0] = -1.0
    Q, r = frame_align(A, 1)
    assert r < 1e-12 and np.allclose(Q, A)
    boost = np.array([[math.cosh(1.0), math.sinh(1.0)], [math.sinh(1.0), math.cosh(1.0)]])
    assert frame_align(boost, 1)[1] > 0.5


def test_euclidean_frame_has_no_timelike_vectors():
    assert Frame.orthonormal(euclidean(2), np.zeros(2)).index == 0
