"""Command-line front end: ``ellsym2 verify <suite>`` and ``ellsym2 compute <target>``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from . import kernels
from .checks import SUITES, CheckOptions, run_suite
from .precision import DomainError, PrecisionContext

TARGETS = ("l31", "l32", "de", "je", "kab", "lg", "lchi4", "lsym2", "gcoeffs", "fcoeffs",
           "periods", "elllog")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r} (expected p/q)")


def parse_tau(text: str) -> mpc:
    t = text.strip().replace(" ", "")
    if t == "i":
        return mpc(0, 1)
    try:
        re_, im_ = t.split(",")
        tau = mpc(mpf(re_), mpf(im_))
    except ValueError:
        raise argparse.ArgumentTypeError(f"tau must be 'i' or 're,im', got {text!r}")
    if tau.imag <= 0:
        raise argparse.ArgumentTypeError("tau must have positive imaginary part")
    return tau


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=int, default=20)
    p.add_argument("--radius", type=int, default=None,
                   help="lattice radius (default 2000; 1000 for K-series checks)")
    p.add_argument("--prime-bound", type=int, default=100000)
    p.add_argument("--threads", type=int, default=0, help="0 uses all hardware threads")
    p.add_argument("--quick", action="store_true", help="reduced radii and bounds")
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.add_argument("--out", default=None, help="also write output to this file")
    p.add_argument("--cache-dir", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellsym2", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=tuple(SUITES) + ("all",))
    _common(v)

    c = sub.add_parser("compute", help="evaluate a single quantity")
    c.add_argument("target", choices=TARGETS)
    _common(c)
    c.add_argument("--xi", type=parse_rational, default=Fraction(0))
    c.add_argument("--eta", type=parse_rational, default=Fraction(0))
    c.add_argument("--tau", type=parse_tau, default=mpc(0, 1))
    c.add_argument("--route", choices=("qseries", "lattice"), default="qseries")
    c.add_argument("--t", type=int, default=2)
    c.add_argument("--s", type=int, default=3)
    c.add_argument("--N", type=int, default=100)
    c.add_argument("--a", type=int, default=2)
    c.add_argument("--b", type=int, default=2)
    c.add_argument("--curve", default="E2", help="E<d> for y^2 = x^3 - d^2 x, or 37a")
    return parser


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _nstr(x, digits: int) -> str:
    if isinstance(x, mpc) and x.imag == 0:
        x = x.real
    return mpmath.nstr(x, digits)


def _coord(v) -> str:
    return str(v) if isinstance(v, Fraction) else mpmath.nstr(v, 15)


def _options(args) -> CheckOptions:
    opts = CheckOptions(digits=args.digits, prime_bound=args.prime_bound, cache_dir=args.cache_dir)
    if args.radius is not None:
        opts = replace(opts, radius=args.radius, k_radius=args.radius)
    return opts.quickened() if args.quick else opts


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, _options(args))
    fmt = args.format or "json"
    _emit([r.to_json() if fmt == "json" else r.to_text() for r in reports], args.out)
    return 0 if all(r.passed for r in reports) else 1


def _curve(name: str):
    from .curves import CurveModel
    if name == "37a":
        return CurveModel.conductor37()
    if name.startswith("E") and name[1:].isdigit():
        return CurveModel.congruent(int(name[1:]))
    raise DomainError(f"unknown curve {name!r}")


def _compute(args) -> dict:
    from . import curves, elliptic, hecke, kronecker

    prec = PrecisionContext(args.digits)
    radius = args.radius or (300 if args.quick else 2000)
    res: dict = {"target": args.target, "params": {"digits": args.digits}}
    t = args.target
    if t in ("l31", "l32", "de", "je"):
        ctx = elliptic.CurveContext(args.tau)
        pt = elliptic.TorsionPoint(args.xi, args.eta)
        res["params"].update(xi=str(pt.xi), eta=str(pt.eta), tau=_nstr(ctx.tau, 15))
        if args.route == "lattice" and t in ("l31", "l32"):
            fn = elliptic.l31_lattice if t == "l31" else elliptic.l32_lattice
            lv = fn(ctx, pt, radius, prec)
            res.update(value=_nstr(lv.value, args.digits), error_bound=_nstr(lv.tail_bound, 3))
            res["params"]["radius"] = radius
        else:
            fn = {"l31": elliptic.l31_qseries, "l32": elliptic.l32_qseries,
                  "de": elliptic.d_e, "je": elliptic.j_e}[t]
            res.update(value=_nstr(fn(ctx, pt, prec), args.digits),
                       error_bound=_nstr(prec.tol, 3))
    elif t == "kab":
        pt = elliptic.TorsionPoint(args.xi, args.eta)
        r = args.radius or (300 if args.quick else 1000)
        kv = kronecker.k_ab(kronecker.EKSeriesSpec(args.a, args.b, args.tau, pt, r), prec)
        res.update(value=_nstr(kv.value, 15),
                   error_bound=None if kv.tail_bound is None else _nstr(kv.tail_bound, 3),
                   cauchy_diff=_nstr(kv.cauchy_diff, 3), note=kv.note)
        res["params"].update(a=args.a, b=args.b, xi=str(pt.xi), eta=str(pt.eta), radius=r)
    elif t == "lg":
        d = hecke.l_g_details(args.s, prec)
        res.update(value=_nstr(d.value, args.digits), error_bound=_nstr(prec.tol, 3),
                   root_number=d.root_number, root_number_derived=d.derived,
                   consistency=_nstr(d.consistency, 3))
        res["params"]["s"] = args.s
    elif t == "lchi4":
        res.update(value=_nstr(hecke.l_chi4(args.t, prec), args.digits), error_bound=_nstr(prec.tol, 3))
        res["params"]["t"] = args.t
    elif t == "lsym2":
        res.update(value=_nstr(hecke.l_sym2(3, prec), args.digits), error_bound=_nstr(prec.tol, 3))
    elif t in ("gcoeffs", "fcoeffs"):
        qe = hecke.g_qexp(args.N) if t == "gcoeffs" else hecke.f_qexp(args.N)
        res.update(value=" ".join(str(a) for a in qe.coeffs), table=qe.to_text())
        res["params"]["N"] = args.N
    elif t == "periods":
        E = _curve(args.curve)
        pd = curves.period_lattice(E, prec)
        res.update(omega1=_nstr(pd.omega1, args.digits), omega2=_nstr(pd.omega2, args.digits),
                   tau=_nstr(pd.tau, args.digits), real_period=_nstr(pd.real_period, args.digits))
        res["params"]["curve"] = args.curve
    elif t == "elllog":
        E = _curve(args.curve)
        pd = curves.period_lattice(E, prec)
        logs = {}
        if args.curve == "37a":
            base = (Fraction(0), Fraction(0))
            pts = {f"{k}P": E.multiple(k, base) for k in range(1, 7)}
        else:
            pts = curves.congruent_points(int(args.curve[1:]))
        for name, pt in pts.items():
            u = curves.elliptic_log(E, pt, pd, prec)
            logs[name] = [_coord(u.xi), _coord(u.eta)]
        res.update(value=logs, tau=_nstr(pd.tau, 15))
        res["params"]["curve"] = args.curve
    return res


def cmd_compute(args) -> int:
    res = _compute(args)
    coeff_target = args.target in ("gcoeffs", "fcoeffs")
    fmt = args.format or ("text" if coeff_target else "json")
    if coeff_target:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(res["table"])
        res.pop("table")
        line = res["value"] if fmt == "text" else json.dumps(res)
        print(line)
        return 0
    if fmt == "json":
        _emit([json.dumps(res)], args.out)
    else:
        extra = {k: v for k, v in res.items() if k not in ("target", "value", "params")}
        _emit([f"{res['target']} = {res['value']}  {extra}  {res['params']}"], args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    kernels.set_threads(args.threads)
    if args.cache_dir:
        import os
        os.environ.setdefault("ELLSYM2_CACHE", args.cache_dir)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_compute(args)
    except DomainError as exc:
        parser.exit(2, f"ellsym2: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
