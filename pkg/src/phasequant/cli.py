"""Command-line interface: ``phasequant <command> ...``.

Exit status is 0 on success, 1 when a verification suite fails and 2 for
invalid configuration or input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import _kernels
from .config import ConfigError, config_from_dict, load_config
from .expr import ExprEvalError, ExprSyntaxError
from .grid import GridSpec, PhaseSpaceField
from .io import (
    FormatError,
    load_symbol,
    read_signal,
    write_field,
    write_gnuplot,
    write_operator,
    write_signal,
)
from .quantizers import bj_to_weyl_symbol, build_op_bj, build_op_tau
from .signals import Gaussian, Hermite, chirp, two_gaussian
from .symbolic import OrderingRule, normal_form, order_monomial, render, substitute_tau
from .transforms import born_jordan_distribution, cross_ambiguity, cross_wigner, tau_wigner
from .verify import SUITES, run_suite


class UsageError(Exception):
    """Bad input detected after argument parsing (exit status 2)."""


def _grid_from_args(args) -> GridSpec:
    cfg = load_config(getattr(args, "config", None))
    g = cfg.grid.to_dict()
    for key in ("n", "x_min", "x_max", "hbar"):
        val = getattr(args, key, None)
        if val is not None:
            g[key] = val
    return config_from_dict({"grid": g}).grid


def _add_grid_args(p):
    p.add_argument("--config", help="JSON configuration file (grid defaults)")
    p.add_argument("--n", type=int, help="number of samples (power of two >= 8)")
    p.add_argument("--x-min", dest="x_min", type=float)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--hbar", type=float)


def _parse_tau(text):
    """Accept ``0.3`` or ``3/10``; returns (float, Fraction or None)."""
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read tau from {text!r}") from None
    return float(frac), frac


# --- commands ---------------------------------------------------------------

def cmd_gen(args):
    grid = _grid_from_args(args)
    s = math.sqrt(grid.hbar)
    if args.kind == "gaussian":
        sig = Gaussian.normalized(args.width, args.center * s, args.momentum * s, grid.hbar)
    elif args.kind == "hermite":
        sig = Hermite(args.order, grid.hbar)
    elif args.kind == "chirp":
        sig = chirp(args.rate, grid.hbar)
    else:
        sig = two_gaussian(args.separation * s, grid.hbar)
    write_signal(args.output, sig.sample(grid))
    return 0


def _load_pair(args):
    psi = read_signal(args.psi)
    phi = read_signal(args.phi) if args.phi else psi
    return psi, phi


def _emit_field(args, field: PhaseSpaceField, title):
    write_field(args.output, field)
    if args.plot:
        write_gnuplot(args.plot, args.output, title)
    return 0


def cmd_wigner(args):
    psi, phi = _load_pair(args)
    return _emit_field(args, cross_wigner(psi, phi), "Wigner distribution")


def cmd_tauwig(args):
    psi, phi = _load_pair(args)
    tau, _ = _parse_tau(args.tau)
    return _emit_field(args, tau_wigner(psi, phi, tau), f"tau-Wigner distribution, tau={args.tau}")


def cmd_bjdist(args):
    psi, phi = _load_pair(args)
    return _emit_field(args, born_jordan_distribution(psi, phi), "Born-Jordan distribution")


def cmd_ambiguity(args):
    psi, phi = _load_pair(args)
    tau, _ = _parse_tau(args.tau)
    return _emit_field(args, cross_ambiguity(psi, phi, tau), "ambiguity function")


def cmd_quantize(args):
    outputs = args.output or []
    if not outputs:
        raise UsageError("quantize needs -o op.csv")
    if args.apply and len(outputs) < 2:
        raise UsageError("--apply needs a second -o for the transformed signal")
    psi = read_signal(args.apply) if args.apply else None
    grid = psi.grid if psi is not None else _grid_from_args(args)
    symbol = load_symbol(args.symbol)
    tau = None
    if args.scheme == "weyl":
        op, tau = build_op_tau(symbol, 0.5, grid), 0.5
    elif args.scheme == "kn":
        op, tau = build_op_tau(symbol, 1.0, grid), 1.0
    elif args.scheme == "tau":
        if args.tau is None:
            raise UsageError("--scheme tau needs --tau")
        tau, _ = _parse_tau(args.tau)
        op = build_op_tau(symbol, tau, grid)
    else:
        op = build_op_bj(symbol, grid)
    write_operator(outputs[0], op)
    report = {
        "scheme": args.scheme,
        "tau": tau,
        "symbol": args.symbol,
        "grid": grid.to_dict(),
        "frobenius_norm": op.frobenius(),
        "diagnostics": op.diagnostics,
    }
    if op.diagnostics.get("aliasing_warning"):
        print("warning: the symbol's sigma-Fourier transform reaches the grid edge "
              f"(edge fraction {op.diagnostics['aliasing_edge_fraction']:.3g}); "
              "the matrix may be aliased", file=sys.stderr)
    with open(outputs[0] + ".json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if psi is not None:
        write_signal(outputs[1], op.apply(psi))
    return 0


def cmd_weylsym(args):
    grid = _grid_from_args(args)
    symbol = load_symbol(args.symbol)
    a = symbol.render(grid)
    write_field(args.output, bj_to_weyl_symbol(a))
    return 0


def cmd_order(args):
    rule = OrderingRule(args.rule)
    poly = order_monomial(rule, args.m, args.n)
    if args.tau is not None:
        if rule is not OrderingRule.SHUBIN_TAU:
            raise UsageError("--tau only applies to --rule tau")
        try:
            value = Fraction(args.tau)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--tau must be an exact rational like 1/2, got {args.tau!r}") from None
        poly = substitute_tau(poly, value)
    if args.normal:
        poly = normal_form(poly)
    print(render(poly))
    return 0


def cmd_verify(args):
    cfg = load_config(args.config)
    report = run_suite(args.suite, cfg)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if not report["pass"]:
        failing = [r for r in report["records"] if not r["pass"]]
        print("verification failed: " + "; ".join(
            f"{r['suite']}/{r['identity']} residual {r['residual']:.3g} > {r['tolerance']:.3g}"
            for r in failing), file=sys.stderr)
        return 1
    return 0


# --- parser ------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="phasequant", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, help="worker threads for the compiled kernels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a sampled test signal")
    p.add_argument("--kind", required=True, choices=["gaussian", "hermite", "chirp", "two-gaussian"])
    p.add_argument("--width", type=float, default=1.0, help="Gaussian width parameter a")
    p.add_argument("--center", type=float, default=0.0, help="centre in units of sqrt(hbar)")
    p.add_argument("--momentum", type=float, default=0.0, help="mean momentum in units of sqrt(hbar)")
    p.add_argument("--order", type=int, default=0, help="Hermite order (0..8)")
    p.add_argument("--rate", type=float, default=0.5, help="chirp rate")
    p.add_argument("--separation", type=float, default=8.0, help="two-Gaussian separation in units of sqrt(hbar)")
    p.add_argument("-o", "--output", required=True)
    _add_grid_args(p)
    p.set_defaults(func=cmd_gen)

    for name, func, helptext in (
        ("wigner", cmd_wigner, "cross-Wigner distribution"),
        ("tauwig", cmd_tauwig, "tau-Wigner distribution"),
        ("bjdist", cmd_bjdist, "Born-Jordan distribution"),
        ("ambiguity", cmd_ambiguity, "cross-ambiguity function"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--psi", required=True)
        p.add_argument("--phi")
        p.add_argument("-o", "--output", required=True)
        p.add_argument("--plot", help="also write a gnuplot script")
        if name == "tauwig":
            p.add_argument("--tau", required=True)
        if name == "ambiguity":
            p.add_argument("--tau", default="1/2")
        p.set_defaults(func=func)

    p = sub.add_parser("quantize", help="operator matrix of a symbol")
    p.add_argument("--scheme", required=True, choices=["weyl", "bj", "tau", "kn"])
    p.add_argument("--tau")
    p.add_argument("--symbol", required=True)
    p.add_argument("-o", "--output", action="append", help="operator CSV, then the --apply output")
    p.add_argument("--apply", help="signal CSV to transform")
    _add_grid_args(p)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("weylsym", help="Weyl symbol of a Born-Jordan operator")
    p.add_argument("--symbol", required=True)
    p.add_argument("-o", "--output", required=True)
    _add_grid_args(p)
    p.set_defaults(func=cmd_weylsym)

    p = sub.add_parser("order", help="ordering rule of a monomial x^m p^n")
    p.add_argument("--rule", required=True, choices=[r.value for r in OrderingRule])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", help="exact value r/s substituted into the tau rule")
    p.add_argument("--normal", action="store_true", help="print the normal-ordered form")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    p.add_argument("--config", help="JSON configuration (default: $PHASEQUANT_CONFIG or built-ins)")
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return 2
        _kernels.set_threads(args.threads)
    try:
        return args.func(args)
    except (ConfigError, FormatError, UsageError, ExprSyntaxError, ExprEvalError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
