"""Command-line frontend: ``nilh <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails (or a spectrum
query is negative under ``--strict``) and 2 on usage errors. Numeric
output depends only on the flags, ``--seed`` and ``NILH_QUAD_ORDER``.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import os
import re
import sys
import time
from fractions import Fraction

from . import __version__
from .algebra import GaussPoly, Poly, hilbert_basis
from .algebra.group import GroupPoint, GroupPointPrime
from .spectrum import (
    SpectrumPoint,
    classify,
    classify_prime,
    embed,
    mesh,
    mesh_csv,
    MESH_HEADER,
)
from .spherical import KINDS, SphericalParams, default_sphere, phi, phi_prime
from .transforms import GelfandOrders, gelfand, gelfand_prime, radon_exact, radon_numeric, radon_op

ORDER_ENV = "NILH_QUAD_ORDER"
# a value like "-1,2,3;0" would otherwise be taken for an option
_NUMERIC_LIST = re.compile(r"^-[\d.][\d.eE+\-,;\s]*$")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers

def parse_vector(text: str, sizes=None) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as comma-separated decimals") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"non-finite coordinate in {text!r}")
    if sizes is not None and len(vals) not in sizes:
        raise UsageError(f"expected {' or '.join(map(str, sizes))} values, got {len(vals)}")
    return vals


def parse_group_point(text: str):
    """``x1,x2,x3;y1,y2,y3`` on N or ``x1,x2,x3;t`` on N'."""
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError(f"group points look like 'x1,x2,x3;y1,y2,y3', got {text!r}")
    x = parse_vector(parts[0], (3,))
    c = parse_vector(parts[1], (1, 3))
    return GroupPoint(x, c) if len(c) == 3 else GroupPointPrime(x, c[0])


def quad_order(args) -> int | None:
    if getattr(args, "order", None) is not None:
        return args.order
    env = os.environ.get(ORDER_ENV)
    if env is None:
        return None
    try:
        n = int(env)
    except ValueError:
        raise UsageError(f"{ORDER_ENV} must be an integer, got {env!r}") from None
    if n < 8:
        raise UsageError(f"{ORDER_ENV} must be at least 8")
    return n


def gelfand_orders(n: int | None) -> GelfandOrders:
    if n is None:
        return GelfandOrders()
    return GelfandOrders(radial=3 * n // 2, angular=n // 2, inner=n)


def test_function(args) -> GaussPoly:
    """(c0 + c1|x|^2 + c2|y|^2 + c3 x.y) exp(-a|x|^2 - b|y|^2)."""
    parse_vector(args.coeffs, (4,))
    # decimal strings convert to exact rationals, keeping the symbolic part exact
    coeffs = [Fraction(c.strip()) for c in args.coeffs.split(",")]
    a, b = Fraction(repr(args.a)), Fraction(repr(args.b))
    if a <= 0 or b <= 0:
        raise UsageError("--a and --b must be positive")
    p = Poly.const("N", coeffs[0])
    for c, q in zip(coeffs[1:], hilbert_basis("N")):
        p = p + q * c
    return GaussPoly.isotropic("N", p, a, b)


def function_dict(args) -> dict:
    return {"coeffs": list(parse_vector(args.coeffs, (4,))), "a": args.a, "b": args.b}


def params_dict(params: SphericalParams) -> dict:
    return {("lambda" if k == "lam" else k): v for k, v in params.as_dict().items()}


def spherical_params(args) -> SphericalParams:
    k = args.family
    try:
        if k in ("regular", "regular_prime"):
            if args.l is None or args.l < 0:
                raise UsageError("--l must be a non-negative integer")
            return SphericalParams(k, lam=args.lam, l=args.l, r=args.r)
        if k == "singular":
            return SphericalParams.singular(args.R)
        return SphericalParams.singular_prime(args.zeta, args.r)
    except ValueError as e:
        raise UsageError(str(e)) from None


# ---------------------------------------------------------------------------
# output

def clean(v):
    """JSON-ready copy: integral floats print as integers, complex as {re, im}."""
    if isinstance(v, dict):
        return {k: clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [clean(x) for x in v]
    if isinstance(v, complex):
        return clean(v.real) if v.imag == 0 else {"re": clean(v.real), "im": clean(v.imag)}
    if isinstance(v, float):
        if not math.isfinite(v):
            return str(v)
        if v.is_integer() and abs(v) < 2**53:
            return int(v)
    return v


def emit(out, command: str, inputs: dict, result, error=None, elapsed=None):
    doc = {
        "command": command,
        "inputs": inputs,
        "result": result,
        "error_estimate": error,
        "elapsed_ms": elapsed,
    }
    out.write(json.dumps(clean(doc), separators=(",", ":"), ensure_ascii=False) + "\n")


def emit_csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_cell(v) for v in row])


def format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        c = clean(v)
        return str(c) if isinstance(c, int) else format(v, ".17g")
    return str(v)


# ---------------------------------------------------------------------------
# commands

def cmd_spherical_eval(args, out) -> int:
    params = spherical_params(args)
    g = parse_group_point(args.point)
    n = quad_order(args)
    if params.on_prime:
        if not isinstance(g, GroupPointPrime):
            raise UsageError("N' families take points 'x1,x2,x3;t'")
        value = phi_prime(params, g)
    else:
        if not isinstance(g, GroupPoint):
            raise UsageError("N families take points 'x1,x2,x3;y1,y2,y3'")
        value = phi(params, g, default_sphere(n) if n else None)
    inputs = {"params": params_dict(params), "point": list(g.coords), "sphere_order": n}
    if args.format == "csv":
        emit_csv(out, ("family", "point", "value"), [(params.kind, args.point, value)])
    else:
        emit(out, "spherical eval", inputs, {"value": value})
    return 0


def cmd_spectrum_check(args, out) -> int:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    p = SpectrumPoint(parse_vector(args.point, (3, 4)))
    c = classify(p, args.tol) if p.dim == 3 else classify_prime(p, args.tol)
    res = c.as_dict()
    if args.format == "csv":
        emit_csv(out, tuple(res), [tuple(res.values())])
    else:
        emit(out, "spectrum check", {"point": list(p.eta), "tol": args.tol}, res)
    return 1 if args.strict and not c.member else 0


def cmd_spectrum_mesh(args, out) -> int:
    lam_range = parse_vector(args.lambda_range, (2,))
    r_range = parse_vector(args.r_range, (2,))
    counts = parse_vector(args.counts, (2,))
    if args.l < 0 or any(c < 0 or c != int(c) for c in counts):
        raise UsageError("--l and --counts must be non-negative integers")
    try:
        rows = mesh(args.l, lam_range, r_range, tuple(int(c) for c in counts))
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.format == "csv":
        out.write(mesh_csv(rows))
    else:
        inputs = {"l": args.l, "lambda_range": lam_range, "r_range": r_range, "counts": counts}
        emit(out, "spectrum mesh", inputs, [dict(zip(MESH_HEADER, r)) for r in rows])
    return 0


def cmd_gelfand(args, out) -> int:
    F = test_function(args)
    orders = gelfand_orders(quad_order(args))
    if args.eta is not None:
        p = SpectrumPoint(parse_vector(args.eta, (3, 4)))
        c = classify(p) if p.dim == 3 else classify_prime(p)
        if not c.member:
            raise UsageError(f"--eta is not in the spectrum (residual {c.residual:.3e})")
        params = c.params
    else:
        params = spherical_params(args)
    t0 = time.perf_counter()
    # N' families transform the Radon image of F
    res = gelfand_prime(radon_exact(F), params, orders) if params.on_prime else gelfand(F, params, orders)
    elapsed = (time.perf_counter() - t0) * 1e3 if args.timing else None
    inputs = {"function": function_dict(args), "params": params_dict(params), "eta": list(embed(params).eta)}
    if args.format == "csv":
        emit_csv(out, ("family", "value", "error_estimate"), [(params.kind, res.value, res.error)])
    else:
        emit(out, "gelfand", inputs, {"value": res.value}, res.error, elapsed)
    return 0


def cmd_radon(args, out) -> int:
    if args.symbol is not None:
        names = dict(zip(("|x|^2", "|y|^2", "x.y"), hilbert_basis("N")))
        if args.symbol not in names:
            raise UsageError(f"--symbol must be one of {', '.join(names)}")
        q = radon_op(names[args.symbol])
        emit(out, "radon", {"symbol": args.symbol}, {"restricted": str(q)}) if args.format == "json" else emit_csv(
            out, ("symbol", "restricted"), [(args.symbol, str(q))]
        )
        return 0
    if args.point is None:
        raise UsageError("radon needs --point 'x1,x2,x3;t' or --symbol")
    g = parse_group_point(args.point)
    if not isinstance(g, GroupPointPrime):
        raise UsageError("radon evaluates at points of N' ('x1,x2,x3;t')")
    F = test_function(args)
    value = float(radon_exact(F)(g))
    err = abs(radon_numeric(F, g) - value)
    inputs = {"function": function_dict(args), "point": list(g.coords)}
    if args.format == "csv":
        emit_csv(out, ("point", "value", "error_estimate"), [(args.point, value, err)])
    else:
        emit(out, "radon", inputs, {"value": value}, err)
    return 0


def cmd_verify(args, out) -> int:
    from . import verify

    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    settings = verify.Settings.from_order(quad_order(args), quick=args.quick)
    names = verify.SUITES if args.suite == "all" else (args.suite,)
    t0 = time.perf_counter()
    if args.jobs > 1 and len(names) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as ex:
            parts = list(ex.map(lambda s: verify.run(s, args.seed, settings), names))
    else:
        parts = [verify.run(s, args.seed, settings) for s in names]
    checks = [c for part in parts for c in part]
    elapsed = (time.perf_counter() - t0) * 1e3 if args.timing else None
    ok = all(c.passed for c in checks)
    if args.format == "json":
        inputs = {"suite": args.suite, "seed": args.seed, "quick": args.quick, "order": settings.sphere}
        result = {"passed": ok, "checks": [c.as_dict() for c in checks]}
        emit(out, "verify", inputs, result, None, elapsed)
    else:
        emit_csv(
            out,
            ("suite", "name", "measured", "threshold", "pass"),
            [(c.suite, c.name, c.measured, c.threshold, c.passed) for c in checks],
        )
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser

def _add_function_flags(p):
    p.add_argument("--a", type=float, default=1.0, help="x-decay rate a in exp(-a|x|^2 - b|y|^2) (default 1)")
    p.add_argument("--b", type=float, default=1.0, help="y-decay rate b (default 1)")
    p.add_argument(
        "--coeffs",
        default="1,0,0,0",
        help="coefficients of 1, |x|^2, |y|^2, x.y in the polynomial factor (default 1,0,0,0)",
    )


def _add_param_flags(p, required=True):
    p.add_argument("--family", choices=KINDS, required=required, help="spherical-function family")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="lambda > 0 for regular families (default 1)")
    p.add_argument("--l", type=int, default=0, help="Laguerre index l >= 0 (default 0)")
    p.add_argument("--r", type=float, default=0.0, help="r for regular and singular N' families (default 0)")
    p.add_argument("--R", type=float, default=0.0, help="R >= 0 for the singular N family (default 0)")
    p.add_argument("--zeta", type=float, default=0.0, help="zeta >= 0 for the singular N' family (default 0)")


def _add_order(p):
    p.add_argument(
        "--order",
        type=int,
        default=None,
        help=f"sphere quadrature order n (overrides ${ORDER_ENV}; SO(3) uses 3n/8, radial 3n/2; default 64)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilh",
        description="Spherical functions, spectra and transforms for the free two-step nilpotent group N(3,2).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sph = sub.add_parser("spherical", help="spherical-function evaluation")
    sph_sub = sph.add_subparsers(dest="action", required=True, metavar="ACTION")
    ev = sph_sub.add_parser("eval", help="evaluate one bounded spherical function at a point")
    _add_param_flags(ev)
    ev.add_argument("--point", required=True, help="'x1,x2,x3;y1,y2,y3' on N or 'x1,x2,x3;t' on N'")
    _add_order(ev)
    ev.add_argument("--format", choices=("json", "csv"), default="json")
    ev.set_defaults(func=cmd_spherical_eval)

    spec = sub.add_parser("spectrum", help="spectrum membership and mesh export")
    spec_sub = spec.add_subparsers(dest="action", required=True, metavar="ACTION")
    chk = spec_sub.add_parser("check", help="classify a point of R^3 (N) or R^4 (N')")
    chk.add_argument("--point", required=True, help="eta1,eta2,eta3[,eta4]")
    chk.add_argument("--tol", type=float, default=1e-9, help="membership tolerance (default 1e-9)")
    chk.add_argument("--format", choices=("json", "csv"), default="json")
    chk.add_argument("--strict", action="store_true", help="exit 1 when the point is not a member")
    chk.set_defaults(func=cmd_spectrum_check)
    ms = spec_sub.add_parser("mesh", help="grid of points on the surface Gamma_l")
    ms.add_argument("--l", type=int, required=True, help="surface index l >= 0")
    ms.add_argument("--lambda-range", default="1,1", help="lambda_min,lambda_max (default 1,1)")
    ms.add_argument("--r-range", default="0,0", help="r_min,r_max (default 0,0)")
    ms.add_argument("--counts", default="1,1", help="n_lambda,n_r (default 1,1)")
    ms.add_argument("--format", choices=("json", "csv"), default="csv")
    ms.set_defaults(func=cmd_spectrum_mesh)

    gf = sub.add_parser(
        "gelfand",
        help="Gelfand transform of an invariant Gaussian test function",
        description="N' families transform the Radon image of the test function.",
    )
    _add_function_flags(gf)
    _add_param_flags(gf, required=False)
    gf.add_argument("--eta", default=None, help="spectrum point instead of --family parameters")
    _add_order(gf)
    gf.add_argument("--timing", action="store_true", help="report elapsed_ms (otherwise null)")
    gf.add_argument("--format", choices=("json", "csv"), default="json")
    gf.set_defaults(func=cmd_gelfand)

    rd = sub.add_parser("radon", help="central Radon transform of a test function or a symbol")
    _add_function_flags(rd)
    rd.add_argument("--point", default=None, help="'x1,x2,x3;t' on N'")
    rd.add_argument("--symbol", default=None, help="restrict one of |x|^2, |y|^2, x.y to N'")
    rd.add_argument("--format", choices=("json", "csv"), default="json")
    rd.set_defaults(func=cmd_radon)

    vf = sub.add_parser("verify", help="run the property suites")
    vf.add_argument(
        "--suite",
        choices=("all", "algebra", "eigen", "intertwine", "diagram", "moments", "quadrature", "spectrum"),
        default="all",
    )
    vf.add_argument("--seed", type=int, default=42, help="seed for sampled checks (default 42)")
    vf.add_argument("--quick", action="store_true", help="fewer samples and lower orders")
    vf.add_argument("--jobs", type=int, default=1, help="maximum concurrent suites (default 1)")
    _add_order(vf)
    vf.add_argument("--timing", action="store_true", help="report elapsed_ms (otherwise null)")
    vf.add_argument("--format", choices=("json", "csv"), default="csv")
    vf.set_defaults(func=cmd_verify)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    for i in range(len(argv) - 1):
        if argv[i].startswith("--") and "=" not in argv[i] and _NUMERIC_LIST.match(argv[i + 1]):
            argv[i + 1] = argv[i] + "=" + argv[i + 1]
            argv[i] = ""
    argv = [a for a in argv if a != ""]
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "gelfand" and args.family is None and args.eta is None:
        parser.print_usage(err)
        err.write("nilh: error: gelfand needs --family or --eta\n")
        return 2
    try:
        return args.func(args, out)
    except UsageError as e:
        parser.print_usage(err)
        err.write(f"nilh: error: {e}\n")
        return 2


def main() -> None:
    sys.exit(run())
