"""Command-line interface: identity suites, evaluations, and table dumps.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage error.
Diagnostics go to standard error; results go to standard output or to the
paths given with --json / --csv.
"""

from __future__ import annotations

import argparse
import csv as _csv
import math
import sys
from fractions import Fraction

from .scalar import DEFAULT_PRECISION_BITS, NumScalar
from .orthopoly import (
    FAMILIES,
    FamilyParams,
    aw_measure,
    eval_poly,
    integrate,
)
from .qalgebra import spherical_rho
from .qseries import qintegral
from .reps import haar_trace
from .verify import SUITE_NAMES, run_suite

__all__ = ["cli_main"]


class _UsageError(Exception):
    pass


def _parse_q(text, allow_exact=False):
    """Parse a --q value: 'exact', a fraction like 1/2, or a decimal."""
    if text is None:
        return None
    if text == "exact":
        if not allow_exact:
            raise _UsageError("--q exact is only valid for the exact suites")
        return None
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"cannot parse --q value {text!r}: {exc}")
    if not 0 < v < 1:
        raise _UsageError("--q must lie strictly between 0 and 1")
    return v


def _parse_params(text):
    try:
        return tuple(Fraction(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"cannot parse --params {text!r}: {exc}")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="qsl2",
        description="quantum SL(2) special-function engine: evaluations, "
                    "orthogonality tables, Haar comparisons, identity "
                    "suites, and CSV dumps",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, q_default="1/2"):
        p.add_argument("--q", default=q_default,
                       help="deformation parameter (fraction or decimal; "
                            "'exact' for the symbolic suites)")
        p.add_argument("--precision-bits", type=int,
                       default=DEFAULT_PRECISION_BITS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--truncation", type=int, default=None,
                       help="operator/series truncation size")
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--json", metavar="PATH", default=None,
                       help="write a JSON report to PATH ('-' for stdout)")
        p.add_argument("--csv", metavar="PATH", default=None,
                       help="write a CSV report to PATH ('-' for stdout)")

    p = sub.add_parser("eval", help="evaluate a polynomial family member")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--params", required=True,
                   help="comma-separated family parameters")
    p.add_argument("--x", required=True)
    p.add_argument("--digits", type=int, default=30)
    common(p)

    p = sub.add_parser("ortho",
                       help="orthogonality table of the Askey-Wilson family")
    p.add_argument("--params", required=True,
                   help="comma-separated a,b,c,d")
    p.add_argument("--n-max", type=int, default=3)
    common(p)

    p = sub.add_parser("haar",
                       help="Haar functional versus orthogonality-measure "
                            "moments of a spherical element")
    p.add_argument("--sigma", default="3/10",
                   help="fraction, or 'inf' for the q-integral case")
    p.add_argument("--tau", default="1/10")
    p.add_argument("--m-max", type=int, default=4)
    common(p)

    p = sub.add_parser("suite", help="run a named identity suite")
    p.add_argument("name", choices=SUITE_NAMES)
    common(p, q_default=None)

    p = sub.add_parser("table", help="CSV dump (family, n, x, value)")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--params", required=True)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--x-min", type=float, default=-1.0)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=21)
    common(p)
    return ap


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _emit_rows(args, header, rows):
    """Print rows to stdout, and to --csv if given."""
    def write(fh):
        w = _csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow(r)
    if args.csv:
        fh, close = _open_out(args.csv)
        try:
            write(fh)
        finally:
            if close:
                fh.close()
    else:
        write(sys.stdout)


def _cmd_eval(args):
    q = _parse_q(args.q)
    prec = max(args.precision_bits, int(args.digits * 3.33) + 16)
    qn = NumScalar(q, prec)
    fp = FamilyParams(args.family,
                      tuple(NumScalar(p, prec) for p in _parse_params(args.params)),
                      qn)
    try:
        x = Fraction(args.x)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"cannot parse --x {args.x!r}: {exc}")
    v = eval_poly(fp, args.n, NumScalar(x, prec))
    import mpmath
    with mpmath.mp.workprec(prec):
        if abs(complex(v).imag) == 0.0:
            print(mpmath.nstr(v.val.real, args.digits))
        else:
            print(mpmath.nstr(v.val, args.digits))
    return 0


def _cmd_ortho(args):
    q = _parse_q(args.q)
    prec = args.precision_bits
    qn = NumScalar(q, prec)
    params = tuple(NumScalar(p, prec) for p in _parse_params(args.params))
    if len(params) != 4:
        raise _UsageError("ortho expects four parameters a,b,c,d")
    meas = aw_measure(*params, qn, prec)
    fp = FamilyParams("askey-wilson", params, qn)
    rows = []
    failed = False
    tol = args.tolerance if args.tolerance is not None else 1e-8
    for n in range(args.n_max + 1):
        for m in range(n, args.n_max + 1):
            val = integrate(meas, lambda x: eval_poly(fp, n, x)
                            * eval_poly(fp, m, x))
            if n == m:
                norm = float(abs(val))
                rows.append([n, m, repr(float(abs(val))), ""])
            else:
                resid = float(abs(val))
                ok = resid <= tol * max(1.0, norm)
                failed = failed or not ok
                rows.append([n, m, repr(resid), "ok" if ok else "FAIL"])
    _emit_rows(args, ["n", "m", "value", "status"], rows)
    return 1 if failed else 0


def _cmd_haar(args):
    q = _parse_q(args.q)
    prec = args.precision_bits
    qn = NumScalar(q, prec)
    q2 = qn * qn
    tau = Fraction(args.tau)
    sigma = math.inf if args.sigma == "inf" else Fraction(args.sigma)
    N = args.truncation or 200
    rho = spherical_rho(tau, sigma, qn)
    if sigma is math.inf:
        meas = None
        q2t = qn ** (2 * tau)
    else:
        a = -qn ** (sigma + tau + 1)
        b = -qn ** (1 - sigma - tau)
        c = qn ** (sigma - tau + 1)
        d = qn ** (1 - sigma + tau)
        meas = aw_measure(a, b, c, d, q2, prec)
    tol = args.tolerance if args.tolerance is not None else 1e-8
    rows, failed = [], False
    p = rho ** 0
    for m in range(args.m_max + 1):
        if m > 0:
            p = p * rho
        lhs = haar_trace(p, N=N)
        if meas is None:
            rhs = qintegral(lambda x: x ** m, -1, q2t, q2, prec) / (1 + q2t)
        else:
            rhs = integrate(meas, lambda x: x ** m)
        diff = float(abs(lhs - rhs))
        ok = diff <= tol
        failed = failed or not ok
        rows.append([m, repr(float(abs(lhs))), repr(float(abs(rhs))),
                     repr(diff), "ok" if ok else "FAIL"])
    _emit_rows(args, ["m", "haar_trace", "measure_moment", "abs_diff",
                      "status"], rows)
    return 1 if failed else 0


def _cmd_suite(args):
    q = _parse_q(args.q, allow_exact=True) if args.q is not None else None
    report = run_suite(args.name, q=q, precision_bits=args.precision_bits,
                       truncation=args.truncation, seed=args.seed,
                       tolerance=args.tolerance)
    if args.json:
        fh, close = _open_out(args.json)
        try:
            fh.write(report.to_json() + "\n")
        finally:
            if close:
                fh.close()
    if args.csv:
        fh, close = _open_out(args.csv)
        try:
            report.write_csv(fh)
        finally:
            if close:
                fh.close()
    npass = sum(c.ok for c in report.checks)
    print(f"suite {report.suite}: {npass}/{len(report.checks)} checks passed")
    for c in report.failures:
        print(f"FAILED {c.id} residual={c.residual!r} tol={c.tol!r} "
              f"params={c.params}", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_table(args):
    q = _parse_q(args.q)
    prec = args.precision_bits
    qn = NumScalar(q, prec)
    fp = FamilyParams(args.family,
                      tuple(NumScalar(p, prec) for p in _parse_params(args.params)),
                      qn)
    if args.points < 2 or args.x_max <= args.x_min:
        raise _UsageError("need --points >= 2 and --x-max > --x-min")
    rows = []
    for n in range(args.n_max + 1):
        for i in range(args.points):
            x = args.x_min + (args.x_max - args.x_min) * i / (args.points - 1)
            v = eval_poly(fp, n, NumScalar(x, prec))
            rows.append([args.family, n, repr(x), repr(float(abs(v)))
                         if complex(v).imag == 0 and complex(v).real >= 0
                         else repr(complex(v).real)])
    _emit_rows(args, ["family", "n", "x", "value"], rows)
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "ortho": _cmd_ortho,
    "haar": _cmd_haar,
    "suite": _cmd_suite,
    "table": _cmd_table,
}


def cli_main(argv=None):
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # diagnostics, never a traceback to the user
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(cli_main())
