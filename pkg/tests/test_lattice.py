import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzkit.chart import Box
from lorentzkit.lattice import (
    CSV_COLUMNS,
    BudgetError,
    OffLatticeError,
    UnreachableError,
    build_lattice,
    distance_matrix,
    encodes_causality,
    lattice_distance,
    lattice_for,
    lattice_reach,
    null_distance,
    null_wick_distance,
    path_null_length,
    refine_study,
    stencil_offsets,
    wick_distance,
    write_records,
)
from lorentzkit.scenarios import build

SQRT2 = math.sqrt(2)


FLAT = lattice_for(build("minkowski2d", half_width=1.0), 0.05, 3)


@pytest.fixture
def flat():
    return FLAT


def test_stencil_offsets_are_primitive_half_stencil():
    off = stencil_offsets(2, 3)
    assert len(off) == 16
    assert all(math.gcd(*map(abs, o)) == 1 for o in off)
    # no offset together with its negative
    seen = {tuple(o) for o in off}
    assert not any(tuple(-np.array(o)) in seen for o in off)


def test_small_flat_lattice():
    lat = build_lattice(build("minkowski2d").g, build("minkowski2d").tau, Box((0.0, 0.0), (1.0, 1.0)), 0.5, 1)
    assert lat.num_nodes == 9
    assert null_distance(lat, (0.0, 0.0), (0.0, 1.0)).value == pytest.approx(1.0)
    assert null_wick_distance(lat, (0.0, 0.0), (0.0, 1.0)).value == pytest.approx(SQRT2)


def test_timelike_pair_null_distance_is_time_difference(flat):
    d = null_distance(flat, (-1.0, 0.0), (0.5, 0.3))
    assert d.value == pytest.approx(1.5, abs=1e-12)


def test_wick_distance_is_euclidean_in_flat_space(flat):
    # straight edge directions in the R=3 stencil
    d = wick_distance(flat, (-1.0, -1.0), (0.5, 0.0))
    assert d.value == pytest.approx(math.hypot(1.5, 1.0), rel=1e-12)


@given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 40), st.integers(0, 40))
@settings(max_examples=30, deadline=None)
def test_sqrt2_identity_flat(i, j, k, m):
    lat = FLAT
    if (i + j + k + m) % 2:
        m = m + 1 if m < 40 else m - 1
    p = (-1.0 + 0.05 * i, -1.0 + 0.05 * j)
    q = (-1.0 + 0.05 * k, -1.0 + 0.05 * m)
    if p == q:
        return
    dn = null_distance(lat, p, q).value
    assert null_wick_distance(lat, p, q).value == pytest.approx(SQRT2 * dn, rel=1e-12)
    assert dn == pytest.approx(max(abs(q[0] - p[0]), abs(q[1] - p[1])), rel=1e-9)


def test_parity_obstruction_reports_unreachable(flat):
    with pytest.raises(UnreachableError, match="stencil"):
        null_wick_distance(flat, (0.0, 0.0), (0.0, 0.05))


def test_off_lattice_points(flat):
    with pytest.raises(OffLatticeError):
        flat.node((0.01, 0.0))
    with pytest.raises(OffLatticeError):
        flat.node((2.0, 0.0))


def test_budget_guard(monkeypatch):
    monkeypatch.setenv("LORENTZKIT_MAX_NODES", "100")
    with pytest.raises(BudgetError):
        lattice_for(build("minkowski2d"), 0.05, 3)


def test_periodic_axis_wraps():
    scen = build("de-sitter", i=0)
    lat = lattice_for(scen, 0.1, 2)
    # crossing the seam is cheaper than going around
    lo, hi = scen.box.lower[1], scen.box.upper[1]
    h = lat.spacing[1]
    near = null_distance(lat, (0.0, lo), (0.0, lo + (lat.shape[1] - 1) * h))
    assert near.value < 3 * h + 1e-9


def test_reach_matches_cone_in_flat_space(flat):
    reach = set(lattice_reach(flat, (0.0, 0.0)).tolist())
    assert flat.node((0.5, 0.45)) in reach
    assert flat.node((0.5, 0.55)) not in reach
    assert flat.node((-0.5, 0.0)) not in reach


def test_encodes_causality(flat):
    rec = encodes_causality(flat, (0.0, 0.0), (0.5, 0.2))
    assert rec["causal"] and rec["null_encodes"] and rec["wick_below_sqrt2"] is not None
    rec = encodes_causality(flat, (0.0, 0.0), (0.2, 0.5))
    # spacelike: the null distance exceeds delta tau, consistent with the encoding
    assert not rec["causal"] and rec["null_encodes"] and rec["null_residual"] > 0.2


def test_path_null_length_flags_spacelike_pieces():
    scen = build("minkowski2d")
    poly = np.array([[0.0, 0.0], [0.5, 0.5], [0.5, 1.5]])
    length, flagged = path_null_length(scen.tau, poly, scen.g)
    assert length == pytest.approx(0.5)
    assert list(flagged) == [1]


def test_distance_matrix_symmetry(flat):
    nodes = np.arange(0, flat.num_nodes, 97)[:12]
    D = distance_matrix(flat, nodes, "wick")
    assert np.allclose(D, D.T, rtol=1e-12)


def test_refinement_monotone_in_stencil():
    rows = refine_study(build("grw"), (0.0, 0.0), (0.6, 0.4), "wick", [0.1], [1, 2, 3])
    assert all(r["monotone"] for r in rows)


def test_records_csv_and_json(flat):
    recs = [lattice_distance(flat, (0.0, 0.0), (0.5, 0.2), k).record() for k in ("null", "wick")]
    text = write_records(recs, "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert float(rows[0]["value"]) == pytest.approx(0.5)
    assert json.loads(write_records(recs, "json"))[1]["kind"] == "wick"
    assert write_records(recs, "csv") == text
