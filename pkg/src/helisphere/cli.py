"""Command line interface: ``helisphere <subcommand> ...``.

Exit codes: 0 success, 1 bad input or domain error, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .associated import (AssociatedParams, HelicoidParams, associated_from_params,
                         conjugate_pitches, isometry_pullback, params_from_associated,
                         relation_residuals, verify_association)
from .errors import HelisphereError
from .export import (build_mesh, parse_momentum_spec, write_curve_csv, write_obj,
                     write_reports)
from .families import catenary, closure_function, closure_residual, great_circle
from .families import CatenaryParams, solve_beta_for_rotation
from .momentum import ReconstructionConfig, reconstruct_curve
from .surface import HelicoidalSurface
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for failed checks here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _pair(text, what="range"):
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} must look like a:b, got {text!r}") from None
    return a, b


def _grid(text):
    try:
        a, b = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 400x400, got {text!r}") from None
    return a, b


def _vec4(text):
    try:
        v = [float(x) for x in text.split(",")]
    except ValueError:
        v = []
    if len(v) != 4:
        raise argparse.ArgumentTypeError(f"pole must be 4 comma-separated numbers, got {text!r}")
    return np.array(v)


def _write_json(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _profile_from_momentum(args, s_span):
    p = parse_momentum_spec(args.momentum)
    lo, hi = p.domain
    z0 = 0.5 * (lo + hi) if args.z0 is None else args.z0
    cfg = ReconstructionConfig(n_samples=max(2, args.samples))
    return reconstruct_curve(p, s_span, z0, -1 if args.down else 1, cfg)


def cmd_curve(args):
    curve = _profile_from_momentum(args, args.span)
    smp = curve.sample(args.samples)
    write_curve_csv(smp, sys.stdout if args.out in (None, "-") else args.out)
    return EXIT_OK


def cmd_catenary(args):
    if (args.q is None) == (args.beta is None):
        raise HelisphereError("give exactly one of --q or --beta")
    if args.q is not None:
        q = Fraction(args.q)
        params = solve_beta_for_rotation(q)
    else:
        params = CatenaryParams(args.beta)
        q = None
    T = closure_function(params.beta)
    out = {"beta": params.beta, "c": params.c, "T": T}
    ok = True
    if q is not None:
        res = closure_residual(params, q)
        out.update({"q": str(q), "T_residual": abs(T - float(q)), "closure_residual": res})
        ok = abs(T - float(q)) < 1e-10 and res < 1e-7
        out["pass"] = ok
    _write_json(out, args.out)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_surface(args):
    sources = sum(v is not None and v is not False for v in (args.momentum, args.q, args.lawson))
    if sources != 1:
        raise HelisphereError("give exactly one of --momentum, --q or --lawson")
    if args.q is not None:
        q = Fraction(args.q)
        params = solve_beta_for_rotation(q)
        span = args.span or (0.0, q.denominator * math.pi)
        curve = catenary(params, s_span=span)
    elif args.lawson:
        curve = great_circle(0.5 * math.pi, s_span=args.span)
    else:
        curve = _profile_from_momentum(args, args.span or (0.0, 2.0 * math.pi))
    surf = HelicoidalSurface(args.pitch, curve)
    n_s, n_t = args.grid
    mesh = build_mesh(surf, curve.s_span, args.t_range, n_s, n_t,
                      projection=None if args.ambient else "stereographic", pole=args.pole)
    write_obj(mesh, sys.stdout if args.out in (None, "-") else args.out)
    return EXIT_OK


def cmd_associate(args):
    if args.h is not None or args.c is not None:
        if args.h is None or args.c is None:
            raise HelisphereError("--h and --c go together")
        ap = associated_from_params(HelicoidParams(args.h, args.c))
    elif args.beta is not None and args.theta is not None:
        ap = AssociatedParams(args.beta, args.theta)
    else:
        raise HelisphereError("give --beta and --theta, or --h and --c")
    hp = params_from_associated(ap)
    report = verify_association(ap)
    reports = [report]
    out = {"beta": ap.beta, "theta": ap.theta, "h": hp.h, "c": hp.c,
           "relation_residuals": list(relation_residuals(ap, hp))}
    if abs(ap.theta - 0.5 * math.pi) < 1e-12 and ap.beta < 0.5 * math.pi:
        reports += [isometry_pullback(ap.beta, h) for h in conjugate_pitches(ap.beta)]
    out["checks"] = [r.to_json() for r in reports]
    _write_json(out, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_verify(args):
    reports = run_suite(args.suite)
    write_reports(reports, sys.stdout if args.out in (None, "-") else args.out)
    for r in reports:
        if not r.passed:
            print(f"FAIL {r.name}: {r.max_residual:.3g} >= {r.tolerance:.3g}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _add_reconstruction_flags(sp):
    sp.add_argument("--momentum", help="const:c | linear:k0,c | catenary:c | minimal:h,c | table:path")
    sp.add_argument("--z0", type=float, help="starting height (default: middle of the domain)")
    sp.add_argument("--down", action="store_true", help="start moving down in height")
    sp.add_argument("--samples", type=int, default=513, help="number of output samples")


def build_parser():
    ap = _Parser(prog="helisphere", description="Spherical curves from angular momentum and "
                 "helicoidal surfaces in the 3-sphere.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("curve", help="reconstruct a profile curve and write CSV")
    _add_reconstruction_flags(sp)
    sp.add_argument("--span", type=_pair, default=(0.0, 2.0 * math.pi), help="arc length a:b")
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("catenary", help="closed catenary for a rotation number, as JSON")
    sp.add_argument("--q", help="rotation number, e.g. 2/3")
    sp.add_argument("--beta", type=float, help="evaluate T at this beta instead")
    sp.add_argument("--out", help="JSON path (default stdout)")
    sp.set_defaults(func=cmd_catenary)

    sp = sub.add_parser("surface", help="mesh a helicoidal surface as OBJ")
    _add_reconstruction_flags(sp)
    sp.add_argument("--q", help="closed catenoid for this rotation number")
    sp.add_argument("--lawson", action="store_true", help="profile through the pole (K = 0)")
    sp.add_argument("--pitch", type=float, default=0.0)
    sp.add_argument("--span", type=_pair, help="profile arc length a:b")
    sp.add_argument("--t-range", type=_pair, default=(0.0, 2.0 * math.pi), dest="t_range")
    sp.add_argument("--grid", type=_grid, default=(400, 400), help="n_s x n_t, e.g. 400x400")
    sp.add_argument("--pole", type=_vec4, help="projection pole x,y,z,w (default 0,0,0,1)")
    sp.add_argument("--ambient", action="store_true", help="write 4-D points, no projection")
    sp.add_argument("--out", help="OBJ path (default stdout)")
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("associate", help="associated-family parameters and checks, as JSON")
    sp.add_argument("--beta", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--h", type=float)
    sp.add_argument("--c", type=float)
    sp.add_argument("--out", help="JSON path (default stdout)")
    sp.set_defaults(func=cmd_associate)

    sp = sub.add_parser("verify", help="run verification suites, JSON array of reports")
    sp.add_argument("--suite", default="all", choices=["all", *SUITES])
    sp.add_argument("--out", help="JSON path (default stdout)")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HelisphereError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"helisphere {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
