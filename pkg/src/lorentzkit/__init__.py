"""Numerical toolkit for Lorentzian metrics with a temporal function: Wick rotation, steepness,
lattice null and Wick distances, geodesics and frames, and convergence diagnostics for metric sequences."""

from .chart import Box, ChartError, DomainError, MetricField, SignatureError, euclidean, minkowski, round_sphere
from .causal import causal_character, reach_2d_diagonal
from .convergence import (
    Diffeo,
    MetricSequence,
    anchored_convergence,
    check_convergence,
    ck_norm,
    quasi_isometry_factor,
    wick_pipeline,
)
from .geodesic import Frame, anchored_metric, exp_map, frame_align, geodesic, log_map, parallel_transport
from .lattice import (
    build_lattice,
    lattice_distance,
    lattice_for,
    lattice_reach,
    null_distance,
    null_wick_distance,
    wick_distance,
)
from .scenarios import Scenario, build, scenario_names
from .temporal import (
    TemporalField,
    canonical_field,
    canonical_rep,
    is_h_steep,
    is_steep,
    lapse,
    wick_metric,
    wick_rotate,
)

__version__ = "0.1.0"
