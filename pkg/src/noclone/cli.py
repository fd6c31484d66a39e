"""Command-line entry point.

Exit codes: 0 when every verification passes, 1 on usage or input errors,
2 when a verification fails. Angles are given in degrees.

Grid specs for ``scan`` are ``START:STOP:STEP`` (inclusive stop), a comma
list ``30,45,60``, or a single value.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .errors import NoCloneError
from .geometry import AngleParams, build_figure1, orthogonality_graph, to_dot, unit
from .hiddenvar import (
    assignments_to_csv,
    chain_constraints,
    enumerate_valid,
    event_mass_identity,
    feasibility,
)
from .montecarlo import GENERATOR_ID, SIGMA_BAND, SampleConfig, estimate_joint
from .proofchain import fmt17, line_values, scan, scan_to_csv, trig_identity_residual
from .quantum import spin_bit_entropy

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _params(theta_deg: float, theta_prime_deg: float) -> AngleParams:
    for val in (theta_deg, theta_prime_deg):
        if not (0.0 < val < 90.0):
            raise UsageError(f"angle {val!r} deg outside the open interval (0, 90)")
    return AngleParams.from_degrees(theta_deg, theta_prime_deg)


def parse_grid(spec: str) -> list[float]:
    """Degrees from ``START:STOP:STEP``, ``x,y,z`` or ``x``."""
    try:
        if ":" in spec:
            start, stop, step = (float(p) for p in spec.split(":"))
            if step <= 0 or stop < start:
                raise UsageError(f"bad grid range {spec!r}")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = [start + k * step for k in range(n)]
        elif spec.strip() == "":
            values = []
        else:
            values = [float(p) for p in spec.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad grid spec {spec!r}: {exc}") from None
    for val in values:
        if not (0.0 < val < 90.0):
            raise UsageError(f"grid value {val!r} deg outside the open interval (0, 90)")
    return values


def parse_direction(spec: str):
    parts = spec.replace("(", "").replace(")", "").split(",")
    try:
        xyz = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"unparseable direction {spec!r}") from None
    if len(xyz) != 3 or not all(math.isfinite(x) for x in xyz):
        raise UsageError(f"direction {spec!r} must be three finite reals")
    try:
        return unit(*xyz)
    except NoCloneError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _meta(args) -> dict:
    return {
        "version": __version__,
        "tol_alg": args.tol_alg,
        "tol_orth": args.tol_orth,
    }


def cmd_verify(args) -> int:
    params = _params(args.theta, args.theta_prime)
    config = build_figure1(params.theta, params.theta_prime)
    graph = orthogonality_graph(config, args.tol_orth)
    topology_ok = graph.is_figure1() and len(graph.triangles) == 2
    report = line_values(params, config, args.tol_orth) if topology_ok else None
    identity = event_mass_identity(graph) if topology_ok else None
    result = feasibility(graph, chain_constraints(config)) if topology_ok else None
    trig = trig_identity_residual(params)

    checks = {
        "topology": topology_ok,
        "event_identity": bool(identity and identity.ok),
        "chain": bool(report and report.ok(args.tol_alg)),
        "trig_identity": trig <= args.tol_alg,
        "negative": bool(report and report.L6 < 0),
        "infeasible": bool(result and not result.feasible),
        "certificate_matches": bool(
            result and result.certificate
            and abs(result.certificate.value - report.L6) <= args.tol_alg
        ),
    }
    out = {
        **_meta(args),
        "theta_deg": args.theta,
        "theta_prime_deg": args.theta_prime,
        "theta": params.theta,
        "theta_prime": params.theta_prime,
        "edges": [f"{p}-{q}" for p, q in graph.edges],
        "valid_assignments": len(identity.assignments) if identity else None,
        "L4": report.L4 if report else None,
        "L5": report.L5 if report else None,
        "L6": report.L6 if report else None,
        "final_value": report.L6 if report else None,
        "substitution_residuals": list(report.substitution_residuals) if report else None,
        "trig_identity_residual": trig,
        "verdict": result.verdict if result else None,
        "certificate_value": result.certificate.value if result and result.certificate else None,
        "checks": checks,
        "contradiction_confirmed": all(checks.values()),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK if out["contradiction_confirmed"] else EXIT_FAIL


def cmd_scan(args) -> int:
    thetas = parse_grid(args.theta)
    thetas_p = parse_grid(args.theta_prime)
    rows = scan(np.radians(thetas).tolist(), np.radians(thetas_p).tolist(), args.tol_alg)
    if args.format == "csv":
        text = scan_to_csv(rows)
    elif args.format == "json":
        text = json.dumps({
            **_meta(args),
            "rows": [r._asdict() for r in rows],
        }, indent=2) + "\n"
    else:
        raise UsageError("scan supports csv or json output")
    _emit(text, args.output)
    return EXIT_OK if all(r.chain_ok for r in rows) else EXIT_FAIL


def cmd_enumerate(args) -> int:
    params = _params(args.theta, args.theta_prime)
    graph = orthogonality_graph(build_figure1(params.theta, params.theta_prime), args.tol_orth)
    assignments = enumerate_valid(graph)
    if args.format == "csv":
        text = assignments_to_csv(assignments, graph.nodes)
    elif args.format == "json":
        text = json.dumps({
            **_meta(args),
            "theta_deg": args.theta,
            "theta_prime_deg": args.theta_prime,
            "labels": list(graph.nodes),
            "assignments": assignments,
        }, indent=2) + "\n"
    else:
        text = to_dot(graph)
    _emit(text, args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    u = parse_direction(args.u)
    v = parse_direction(args.v)
    try:
        cfg = SampleConfig(args.seed, args.shots)
    except NoCloneError as exc:
        raise UsageError(str(exc)) from None
    est = estimate_joint(u, v, cfg)
    _emit(est.to_json(args.sigma_band), args.output)
    return EXIT_OK if est.within_band(args.sigma_band) else EXIT_FAIL


def cmd_entropy(args) -> int:
    h = spin_bit_entropy()
    bound = 45 / 49
    rel = "<" if h < bound else ">="
    _emit(f"{h:.10f} {rel} 45/49 = {bound:.10f}\n", args.output)
    return EXIT_OK if h < bound else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol-alg", type=float, default=1e-12, help="algebraic tolerance")
    common.add_argument("--tol-orth", type=float, default=1e-9, help="orthogonality tolerance")
    common.add_argument("--sigma-band", type=float, default=SIGMA_BAND, help="statistical band in sigmas")
    common.add_argument("-o", "--output", default=None, help="output path (default: stdout)")

    parser = _Parser(prog="noclone", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"noclone {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="run every check at one angle pair")
    p.add_argument("theta", type=float, help="theta in degrees")
    p.add_argument("theta_prime", type=float, help="theta' in degrees")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="evaluate the chain over an angle grid")
    p.add_argument("--theta", default="5:85:5")
    p.add_argument("--theta-prime", default="5:85:5")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("enumerate", parents=[common], help="list valid 1,0,1 assignments")
    p.add_argument("theta", type=float)
    p.add_argument("theta_prime", type=float)
    p.add_argument("--format", choices=("csv", "json", "dot"), default="csv")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("simulate", parents=[common], help="sample twinned-pair statistics")
    p.add_argument("--u", required=True, help="direction x,y,z")
    p.add_argument("--v", required=True, help="direction x,y,z")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shots", type=int, default=1_000_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("entropy", parents=[common], help="entropy of one spin-zero answer")
    p.set_defaults(func=cmd_entropy)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not (0 < args.tol_orth <= 1e-6) or args.tol_alg <= 0 or args.sigma_band <= 0:
            raise UsageError("tolerances must be positive and --tol-orth at most 1e-6")
        return args.func(args)
    except UsageError as exc:
        print(f"noclone: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except NoCloneError as exc:
        print(f"noclone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
