"""Command-line front end.

Subcommands: factorize, chart, flow, cells, verify. All artifacts land in
the output directory (flag --out, default from TODA_ATLAS_OUT, else the
working directory). Exit codes: 0 success, 1 check or factorization
failure, 2 input error. The random generator behind every seeded command
is numpy's PCG64 (numpy.random.default_rng).
"""

import argparse
import os
import sys
from dataclasses import dataclass, field as _dataclass_field
from pathlib import Path

import numpy as np

from . import analysis
from .atlas import ChartCoords, FlagPoint, chart_forward, chart_inverse
from .errors import TodaAtlasError
from .factorizations import kan_factorize, unbar_factorize
from .flows import IntegratorConfig, integrate, sym_field, toda_field
from .linalg_core import Spectrum, symmetric_eigen
from .serialization import (
    read_matrix,
    report_to_dict,
    trajectory_diagnostics,
    write_json,
    write_matrix,
    write_trajectory_csv,
)
from .weyl_profiles import Permutation, inversion_sets, lower_pairs

__all__ = ["RunConfig", "run", "main"]

_SUITES = {
    "factor": analysis.factor_suite,
    "atlas": analysis.atlas_suite,
    "toda": analysis.toda_suite,
    "sym": analysis.sym_suite,
    "all": analysis.full_suite,
}


@dataclass
class RunConfig:
    command: str
    out_dir: Path
    input_path: Path | None = None
    kind: str = "kan"
    field: str = "toda"
    direction: str = "forward"
    suite: str = "all"
    n: int = 3
    seed: int = 0
    w: Permutation | None = None
    h: Spectrum | None = None
    integrator: IntegratorConfig = _dataclass_field(default_factory=IntegratorConfig)


def _parse_permutation(text: str) -> Permutation:
    return Permutation(tuple(int(v) for v in text.replace(",", " ").split()))


def _parse_spectrum(text: str) -> Spectrum:
    return Spectrum(tuple(float(v) for v in text.split(",")))


def _default_out_dir() -> Path:
    return Path(os.environ.get("TODA_ATLAS_OUT", "."))


def _run_factorize(config: RunConfig) -> int:
    g = read_matrix(config.input_path)
    out = config.out_dir
    if config.kind == "kan":
        factors = kan_factorize(g)
        write_matrix(out / "k.json", factors.k)
        write_matrix(out / "a.json", factors.a)
        write_matrix(out / "n.json", factors.n)
        residual = float(np.linalg.norm(factors.k @ factors.a @ factors.n - g))
    else:
        factors = unbar_factorize(g)
        write_matrix(out / "u.json", factors.u)
        write_matrix(out / "nbar.json", factors.nbar)
        write_matrix(out / "m.json", factors.m)
        residual = float(np.linalg.norm(factors.u @ factors.nbar @ factors.m - g))
    write_json(out / "factorize_report.json", {"kind": config.kind, "residual": residual})
    print(f"factorize {config.kind}: residual {residual:.3e}")
    return 0


def _run_chart(config: RunConfig) -> int:
    if config.w is None:
        raise ValueError("chart requires --w")
    out = config.out_dir
    if config.direction == "forward":
        y = read_matrix(config.input_path)
        if config.h is not None:
            h = config.h
        else:
            h, _ = symmetric_eigen(y)
        point = FlagPoint(y, h)
        coords = chart_forward(point, config.w)
        back = chart_inverse(coords)
        residual = float(np.linalg.norm(back.y - y))
        payload = {
            "w": list(config.w.images),
            "h": list(h.values),
            "lower": [[float(v) for v in row] for row in coords.lower],
            "round_trip_residual": residual,
        }
        write_json(out / "chart_coords.json", payload)
        print(f"chart forward at w={config.w.images}: round trip {residual:.3e}")
    else:
        if config.h is None:
            raise ValueError("chart --inverse requires --h")
        lower = np.tril(read_matrix(config.input_path), -1)
        coords = ChartCoords(w=config.w, lower=lower, h=config.h)
        point = chart_inverse(coords)
        back = chart_forward(point, config.w)
        residual = float(np.linalg.norm(back.lower - lower))
        write_matrix(out / "chart_point.json", point.y)
        write_json(
            out / "chart_report.json",
            {"w": list(config.w.images), "round_trip_residual": residual},
        )
        print(f"chart inverse at w={config.w.images}: round trip {residual:.3e}")
    return 0


def _run_flow(config: RunConfig) -> int:
    x0 = read_matrix(config.input_path)
    vector_field = toda_field if config.field == "toda" else sym_field
    traj = integrate(vector_field, x0, config.integrator)
    out = config.out_dir
    write_trajectory_csv(out / "trajectory.csv", traj)
    write_json(out / "diagnostics.json", trajectory_diagnostics(traj))
    print(
        f"flow {config.field}: t_final {traj.final_time:.6g}, "
        f"{traj.accepted_steps} accepted / {traj.rejected_steps} rejected, "
        f"field norm {traj.final_field_norm:.3e}, drift {traj.power_trace_drift:.3e}"
    )
    return 0


def _run_cells(config: RunConfig) -> int:
    if config.w is None or config.h is None:
        raise ValueError("cells requires --w and --h")
    if config.w.n != config.h.n:
        raise ValueError("--w and --h sizes disagree")
    sets = inversion_sets(config.w)
    inv = config.w.inverse()
    rows = []
    for i, j in lower_pairs(config.w.n):
        gap = config.h.values[inv(i) - 1] - config.h.values[inv(j) - 1]
        rows.append(
            {
                "pair": [i, j],
                "gap": gap,
                "classification": "unstable" if (i, j) in sets.unstable else "stable",
            }
        )
    payload = {
        "w": list(config.w.images),
        "h": list(config.h.values),
        "stable": sorted([list(p) for p in sets.stable]),
        "unstable": sorted([list(p) for p in sets.unstable]),
        "pairs": rows,
    }
    write_json(config.out_dir / "cells.json", payload)
    print(
        f"cells at w={config.w.images}: {len(sets.unstable)} unstable, "
        f"{len(sets.stable)} stable"
    )
    return 0


def _run_verify(config: RunConfig) -> int:
    suite = _SUITES[config.suite]
    reports = suite(config.n, config.seed)
    out = config.out_dir
    failures = 0
    for report in reports:
        write_json(out / f"check_{report.name.replace('.', '_')}.json", report_to_dict(report))
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{status} {report.name}: residual {report.max_residual:.3e} "
            f"(tol {report.tolerance:.0e}, samples {report.samples})"
        )
        failures += 0 if report.passed else 1
    summary = {
        "suite": config.suite,
        "n": config.n,
        "seed": config.seed,
        "checks": len(reports),
        "failures": failures,
    }
    write_json(out / "summary.json", summary)
    print(f"verify {config.suite}: {len(reports) - failures}/{len(reports)} checks passed")
    return 0 if failures == 0 else 1


def run(config: RunConfig) -> int:
    """Execute one subcommand; returns the process exit code."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    handlers = {
        "factorize": _run_factorize,
        "chart": _run_chart,
        "flow": _run_flow,
        "cells": _run_cells,
        "verify": _run_verify,
    }
    try:
        return handlers[config.command](config)
    except (ValueError, OSError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except TodaAtlasError as err:
        print(f"failure: {err}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toda-atlas",
        description="Matrix factorizations, linearizing charts, and isospectral flows",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", type=Path, default=None, help="output directory")

    p = sub.add_parser("factorize", help="factor a matrix from JSON")
    p.add_argument("--input", required=True, type=Path, help="matrix JSON file")
    p.add_argument("--kind", choices=("kan", "unbar"), default="kan")
    add_out(p)

    p = sub.add_parser("chart", help="apply a chart or its inverse")
    p.add_argument("--w", required=True, help='permutation, e.g. "2 1 3"')
    p.add_argument("--h", default=None, help='spectrum, e.g. "2,0,-2"')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--forward", type=Path, help="matrix JSON of a flag point")
    group.add_argument("--inverse", type=Path, help="matrix JSON of lower coordinates")
    add_out(p)

    p = sub.add_parser("flow", help="integrate a vector field from a matrix JSON")
    p.add_argument("--field", choices=("toda", "sym"), default="toda")
    p.add_argument("--x0", required=True, type=Path)
    p.add_argument("--tmax", type=float, default=30.0)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--max-step", type=float, default=1.0)
    p.add_argument("--stop-field-norm", type=float, default=1e-10)
    add_out(p)

    p = sub.add_parser("cells", help="stable/unstable pair classification for a chart")
    p.add_argument("--w", required=True)
    p.add_argument("--h", required=True)
    add_out(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=tuple(_SUITES), default="all")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    return parser


def _config_from_args(args) -> RunConfig:
    out_dir = args.out if args.out is not None else _default_out_dir()
    config = RunConfig(command=args.command, out_dir=out_dir)
    if args.command == "factorize":
        config.input_path = args.input
        config.kind = args.kind
    elif args.command == "chart":
        config.w = _parse_permutation(args.w)
        if args.h is not None:
            config.h = _parse_spectrum(args.h)
        if args.forward is not None:
            config.direction = "forward"
            config.input_path = args.forward
        else:
            config.direction = "inverse"
            config.input_path = args.inverse
    elif args.command == "flow":
        config.field = args.field
        config.input_path = args.x0
        config.integrator = IntegratorConfig(
            rel_tol=args.rel_tol,
            abs_tol=args.abs_tol,
            max_step=args.max_step,
            t_max=args.tmax,
            stop_field_norm=args.stop_field_norm,
        )
    elif args.command == "cells":
        config.w = _parse_permutation(args.w)
        config.h = _parse_spectrum(args.h)
    elif args.command == "verify":
        config.suite = args.suite
        config.n = args.n
        config.seed = args.seed
        if config.seed < 0:
            raise ValueError("--seed must be nonnegative")
        if not 2 <= config.n <= 12:
            raise ValueError("--n must be between 2 and 12")
    return config


def main(argv=None) -> None:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        sys.exit(2)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
