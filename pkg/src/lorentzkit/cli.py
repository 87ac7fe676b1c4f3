"""``lorentzkit`` command line: lattice distances, verification suites and convergence reports.

Exit codes: 0 success, 1 suite failure, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

import numpy as np

from .chart import Box, ChartError, euclidean
from .convergence import anchored_convergence, check_convergence, wick_pipeline
from .families import FAMILIES, T_NULL, X_NULL, family, flat_null_metric, null_time
from .geodesic import Frame
from .lattice import KINDS, LatticeError, OffLatticeError, lattice_distance, lattice_for, write_records
from .scenarios import ScenarioError, build, load_config, parse_params, parse_point, scenario_names
from .suites import SUITES, jsonable, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

# lattice settings used when neither flags nor a config file give them
LATTICE_DEFAULTS = {
    "appendixD": {"spacing": 0.01, "quadrature": "simpson", "strict": True},
}
DEFAULT_SPACING = 0.02
DEFAULT_STENCIL = 3


class ConfigError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lorentzkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("distance", help="lattice null / Wick / null-Wick distance between two nodes")
    d.add_argument("--scenario", help=f"one of: {', '.join(scenario_names())}")
    d.add_argument("--params", default="", help="scenario parameters, e.g. 'i=2, n=2'")
    d.add_argument("--config", help="INI file with a [scenario] section")
    d.add_argument("--from", dest="p", required=True, help="start node, e.g. 0,0")
    d.add_argument("--to", dest="q", required=True, help="end node, e.g. 0,1")
    d.add_argument("--kind", default="all", choices=list(KINDS) + ["all"])
    d.add_argument("--spacing", type=float)
    d.add_argument("--stencil", type=int)
    d.add_argument("--box", help="'lower ; upper', e.g. '-1,-1 ; 1,1'")
    d.add_argument("--quadrature", choices=["midpoint", "simpson"])
    d.add_argument("--strict", action="store_true", default=None, help="re-check edge endpoints for causality")
    _output_args(d, "csv")

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    _output_args(v, "json")

    c = sub.add_parser("converge", help="convergence report for a metric family")
    c.add_argument("--family", required=True, choices=sorted(FAMILIES))
    c.add_argument("--count", type=int, default=6)
    c.add_argument("--k", type=int, default=0)
    c.add_argument("--no-diffeo", action="store_true", help="compare members without the embeddings")
    c.add_argument("--anchors", action="store_true", help="fill the anchor residual column")
    c.add_argument("--pipeline", action="store_true", help="run the Wick pipeline instead of a C^k report")
    c.add_argument("--eps", type=float, nargs="+", default=[1e-1, 1e-3, 1e-6])
    _output_args(c, "csv")
    return ap


def _output_args(p, default_fmt):
    p.add_argument("--format", choices=["csv", "json"], default=default_fmt)
    p.add_argument("--output", help="write here instead of stdout")


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _box(text: str) -> Box:
    parts = text.split(";")
    if len(parts) != 2:
        raise ConfigError("--box must be written 'lower ; upper'")
    return Box(parse_point(parts[0]), parse_point(parts[1]))


def cmd_distance(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        scen = cfg.scenario()
        spacing, stencil = cfg.spacing, cfg.stencil
    elif args.scenario:
        scen = build(args.scenario, **parse_params(args.params))
        spacing = stencil = None
    else:
        raise ConfigError("distance needs --scenario or --config")
    if args.box:
        scen.box = _box(args.box)
    defaults = LATTICE_DEFAULTS.get(scen.name, {})
    spacing = args.spacing or spacing or defaults.get("spacing", DEFAULT_SPACING)
    stencil = args.stencil or stencil or DEFAULT_STENCIL
    if spacing <= 0 or stencil < 1:
        raise ConfigError("spacing must be positive and stencil at least 1")
    quadrature = args.quadrature or defaults.get("quadrature", "midpoint")
    strict = args.strict if args.strict is not None else defaults.get("strict", False)
    p, q = parse_point(args.p), parse_point(args.q)
    lat = lattice_for(scen, spacing, stencil, quadrature=quadrature, strict=strict)
    kinds = KINDS if args.kind == "all" else (args.kind,)
    records = [lattice_distance(lat, p, q, kind).record() for kind in kinds]
    _emit(write_records(records, args.format), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    result = run_suite(args.suite, seed=args.seed)
    if args.format == "json":
        text = result.to_json(timing=args.timing)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "value", "tolerance", "passed"])
        for c in result.checks:
            w.writerow([result.name, c.name, repr(c.value), c.tolerance, c.passed])
        text = buf.getvalue()
    _emit(text, args.output)
    for c in result.checks:
        print(c.line(), file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAIL


def _limit_for(name: str):
    """Limit metric, limit temporal function, comparison boxes and limit anchor for a family."""
    if name == "de-sitter":
        sc = build("de-sitter", i=0)
        return sc.g, sc.tau, [Box((-1.0, 0.0), (1.0, 2 * np.pi))], Frame.orthonormal(sc.g, np.zeros(2)), sc.wick
    if name in ("constant", "scaled-time"):
        sc = build("minkowski2d", half_width=1.0)
        return sc.g, sc.tau, [sc.box], Frame.orthonormal(sc.g, np.zeros(2)), sc.wick
    flat = flat_null_metric()
    anchor = Frame(np.zeros(2), np.stack([T_NULL, X_NULL], axis=1), 1)
    return flat, null_time(), [Box((-4.0, -4.0), (4.0, 4.0))], anchor, None


def cmd_converge(args) -> int:
    if args.count < 1 or args.k < 0:
        raise ConfigError("--count must be positive and --k non-negative")
    kw = {"diffeo": False} if args.no_diffeo else {}
    if args.no_diffeo and args.family != "de-sitter":
        raise ConfigError("--no-diffeo is only meaningful for the de-sitter family")
    seq = family(args.family, args.count, **kw)
    limit, tau, boxes, anchor, wick = _limit_for(args.family)
    if args.pipeline:
        h = wick if wick is not None else euclidean(2)
        out = wick_pipeline(seq, h, tau, boxes[0], k=max(args.k, 1), expected_limit=limit)
        _emit(json.dumps(jsonable(out), indent=2, sort_keys=True) + "\n", args.output)
        return EXIT_OK
    report = check_convergence(seq, limit, boxes, args.k, args.eps, limit_tau=tau, limit_point=np.zeros(2))
    if args.anchors:
        anchored_convergence(seq, limit, anchor, report)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args.output)
    return EXIT_OK


COMMANDS = {"distance": cmd_distance, "verify": cmd_verify, "converge": cmd_converge}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ScenarioError, OffLatticeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LatticeError, ChartError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
