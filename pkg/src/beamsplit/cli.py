"""Command-line front end.

Exit codes: 0 success, 1 an identity check failed, 2 invalid input,
3 numerical failure.  Errors go to standard error as
``{"error": code, "message": text}``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .beamsplitter import BeamsplitConfig, beamsplit_add, channel_quadrature_order, check_eta
from .checks import GEOM_EPSILON, run_identity_checks
from .continuous import radial_density
from .dynamics import EvolveConfig, evolve_heat
from .errors import BeamsplitError, NumericalError, StepFailure, ValidationError
from .io import dumps_json, file_digest, load_pmf, pmf_to_json, write_density_csv, write_trajectory_csv
from .pmf import geometric_pmf

PRECISION_ENV = "BEAMSPLIT_PRECISION_BITS"

EXIT_OK, EXIT_IDENTITY, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(ValidationError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_precision():
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return None
    try:
        bits = int(raw)
    except ValueError:
        raise ValidationError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    return bits


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _parse_grid(spec: str) -> tuple[float, ...]:
    try:
        start, step, count = spec.split(":")
        start, step, count = float(start), float(step), int(count)
    except ValueError:
        raise ValidationError(f"--eta-grid must look like start:step:count, got {spec!r}") from None
    if count < 1:
        raise ValidationError("--eta-grid count must be at least 1")
    return tuple(start + i * step for i in range(count))


def cmd_convolve(args) -> int:
    X, Y = load_pmf(args.x), load_pmf(args.y)
    eta = check_eta(args.eta)
    backend = {"quadrature": "quadrature", "exact": "exact_moments"}[args.backend]
    bits = args.precision_bits if args.precision_bits is not None else _default_precision()
    cfg = BeamsplitConfig(backend=backend, m_max=args.mmax, precision_bits=bits)
    Z = beamsplit_add(X, Y, eta, cfg)
    _emit(dumps_json(pmf_to_json(Z)), args.out)
    return EXIT_OK


def cmd_evolve(args) -> int:
    X = load_pmf(args.x)
    cfg = EvolveConfig(_parse_grid(args.eta_grid), step=args.step)
    traj = evolve_heat(X, args.lambda_y, cfg)
    if args.out in (None, "-"):
        write_trajectory_csv(traj, sys.stdout)
    else:
        write_trajectory_csv(traj, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    start = time.perf_counter()
    X = load_pmf(args.x)
    Y = load_pmf(args.y) if args.y else geometric_pmf(args.lambda_y, GEOM_EPSILON)
    eta = check_eta(args.eta)
    bits = args.precision_bits if args.precision_bits is not None else (_default_precision() or 256)
    results = run_identity_checks(X, Y, eta, args.lambda_y, precision_bits=bits)
    identities_ok = all(r.passed for r in results if r.kind == "identity")

    inputs = {"x": {"path": args.x, "sha256": file_digest(args.x)}}
    if args.y:
        inputs["y"] = {"path": args.y, "sha256": file_digest(args.y)}
    NX = X.support_bound
    NY = Y.support_bound
    report = {
        "command": "check",
        "argv": {"x": args.x, "y": args.y, "eta": eta, "lambda_y": args.lambda_y},
        "inputs": inputs,
        "config": {
            "precision_bits": bits,
            "backend": "quadrature",
            "support_bound_x": NX,
            "support_bound_y": NY,
            "quadrature_order": channel_quadrature_order(NX, NY, NX + NY),
            "finite_difference_step": 1e-4,
        },
        "checks": [r.as_dict() for r in results],
        "identities_passed": identities_ok,
    }
    if args.timing:
        report["wall_time_s"] = time.perf_counter() - start
    _emit(dumps_json(report), args.report)
    return EXIT_OK if identities_ok else EXIT_IDENTITY


def cmd_density(args) -> int:
    X = load_pmf(args.x)
    f = radial_density(X)
    u_max = args.u_max if args.u_max is not None else f.upper_limit()
    grid = np.linspace(0.0, u_max, args.points)
    if args.out in (None, "-"):
        write_density_csv(f, grid, sys.stdout)
    else:
        write_density_csv(f, grid, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beamsplit", description="Beamsplitter addition of pmfs on the non-negative integers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("convolve", help="compute Z = X [+]_eta Y")
    p.add_argument("--x", required=True, help="pmf JSON for X")
    p.add_argument("--y", required=True, help="pmf JSON for Y")
    p.add_argument("--eta", required=True, type=float)
    p.add_argument("--backend", choices=("quadrature", "exact"), default="quadrature")
    p.add_argument("--mmax", type=int, default=None, help="largest output state (default N_X + N_Y)")
    p.add_argument("--precision-bits", type=int, default=None, help=f"exact backend precision (env {PRECISION_ENV})")
    p.add_argument("--out", default=None, help="output pmf JSON (default stdout)")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("evolve", help="integrate the heat equation in eta")
    p.add_argument("--x", required=True)
    p.add_argument("--lambda-y", required=True, type=float)
    p.add_argument("--eta-grid", required=True, help="start:step:count, decreasing inside (0, 1]")
    p.add_argument("--step", type=float, default=1e-3, help="RK4 step in tau = -log(eta)")
    p.add_argument("--out", default=None, help="trajectory CSV (default stdout)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("check", help="run the identity suite and write a JSON report")
    p.add_argument("--x", required=True)
    p.add_argument("--y", default=None, help="second input (default Geom(lambda-y))")
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--lambda-y", type=float, default=1.0)
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--timing", action="store_true", help="add wall time (makes reports non-reproducible)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("density", help="tabulate the radial density of the continuous counterpart")
    p.add_argument("--x", required=True)
    p.add_argument("--u-max", type=float, default=None)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_density)
    return parser


def _fail(exc: BeamsplitError, status: int, **extra) -> int:
    payload = {"error": exc.code, "message": str(exc)}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload) + "\n")
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except StepFailure as exc:
        return _fail(exc, EXIT_NUMERICAL, last_good_eta=exc.last_good_eta)
    except NumericalError as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except ValidationError as exc:
        return _fail(exc, EXIT_VALIDATION)


if __name__ == "__main__":
    sys.exit(main())
