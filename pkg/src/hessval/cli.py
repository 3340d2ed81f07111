"""Command-line front end.

Exit status: 0 success, 1 invalid input, 2 failed numerical certificate,
64 malformed command line.  Tables are CSV with ``#`` metadata lines and
17 significant digits; ``--json`` switches to a JSON object.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import acceptance
from ._numerics import resolve_seed
from .convexfun import load, to_dict
from .errors import CertificationError, HessvalError
from .hessmeasure import Box, JointRegion, phi_measure, theta_coefficients
from .transforms import legendre, moreau_yosida, rotational_episymmetrize
from .valuations import (ValuationSpec, homogeneous_components, valuate,
                         valuate_moreau, valuate_smooth)
from .zetaspace import (ZetaProfile, abel_forward, abel_inverse, bump,
                        cone_values, gaussian, hat, read_profile,
                        recover_zeta_from_cone_values, write_profile)

EXIT_OK, EXIT_INVALID, EXIT_CERT, EXIT_USAGE = 0, 1, 2, 64

BUILTIN_PROFILES = {"hat": hat, "bump": bump, "gaussian": gaussian}

FAST_SUITE = (1, 2, 3, 5, 7, 8)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    return f"{float(x):.17g}"


class Table:
    """Rows plus metadata, emitted as CSV or JSON."""

    def __init__(self, header, meta=None):
        self.header = list(header)
        self.rows = []
        self.meta = dict(meta or {})

    def add(self, *row):
        self.rows.append(row)

    def render(self, as_json=False):
        if as_json:
            return json.dumps({"meta": self.meta, "rows": [
                dict(zip(self.header, r)) for r in self.rows]}, indent=1,
                sort_keys=True, default=float)
        lines = [f"# {k}={v if isinstance(v, str) else fmt(v)}"
                 for k, v in self.meta.items()]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for r in self.rows:
            writer.writerow([fmt(x) if isinstance(x, (float, int, np.number))
                             else str(x) for x in r])
        return "\n".join(lines + [buf.getvalue().rstrip("\n")])


def _emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def load_zeta(arg):
    """A CSV path, or ``name[:support]`` for a stock profile."""
    name, _, support = arg.partition(":")
    if name in BUILTIN_PROFILES:
        func = BUILTIN_PROFILES[name]
        return func(float(support)) if support else func()
    return read_profile(arg)


def _parse_box(text, n):
    """``lo:hi,lo:hi,...`` to an ``(n, 2)`` array."""
    try:
        box = np.array([[float(v) for v in part.split(":")]
                        for part in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad box {text!r}") from exc
    if box.shape != (n, 2):
        raise UsageError(f"box {text!r} must have {n} intervals lo:hi")
    return box


# ---------------------------------------------------------------- commands

def cmd_transform(args):
    f = load(args.fn)
    if args.op == "legendre":
        g = legendre(f, dual_resolution=args.shape)
    elif args.op == "moreau":
        if args.lam is None:
            raise UsageError("--lambda is required for --op moreau")
        box = None if args.box is None else _parse_box(args.box, f.dim)
        shape = None if args.shape is None else (args.shape,) * f.dim
        g = moreau_yosida(f, args.lam, box, shape)
    else:
        g = rotational_episymmetrize(f, m=args.rotations)
    text = json.dumps(to_dict(g), indent=1)
    _emit(text, args.out)


def cmd_measure(args):
    f = load(args.fn)
    n = f.dim
    js = range(n + 1) if args.j is None else [args.j]
    table = Table(["region", "j", "value", "mc_stderr"],
                  {"function": type(f).__name__})
    for spec in args.box:
        box = _parse_box(spec, n)
        if args.mc:
            seed = resolve_seed(args.seed)
            fit = theta_coefficients(f, JointRegion(Box(box[:, 0], box[:, 1])),
                                     samples=args.samples, seed=seed)
            table.meta["seed"] = seed
            for j in js:
                # coefficient of s^j is the degree-j measure of the box
                table.add(spec, j, fit.coefficients[j], fit.stderr[j])
        else:
            for j in js:
                table.add(spec, j, phi_measure(f, j).mass(box), 0.0)
    _emit(table.render(args.json), args.out)


def _route(name):
    return name.replace("-", "_")


def cmd_valuate(args):
    f = load(args.fn)
    zeta = load_zeta(args.zeta)
    spec = ValuationSpec(args.j, zeta, f.dim, args.side, _route(args.route))
    table = Table(["quantity", "value", "est_error"],
                  {"function": type(f).__name__, "side": args.side,
                   "route": spec.route})
    if spec.route == "moreau":
        res = valuate_moreau(spec, f)
        value, err = res.value, 0.0
        table.meta["condition"] = res.condition
    elif spec.route == "quadrature":
        value = valuate_smooth(spec, f, 64)
        err = abs(value - valuate_smooth(spec, f, 32))
    else:
        value, err = valuate(spec, f), 0.0
    name = "Z*" if args.side == "dual" else "Z"
    table.add(f"{name}_{args.j}", value, err)
    _emit(table.render(args.json), args.out)


def cmd_decompose(args):
    """Homogeneous components of a combination of valuations.

    The valuation file holds ``{"side": ..., "terms": [{"j": J, "zeta":
    "hat:1", "coef": c}, ...]}``.
    """
    f = load(args.fn)
    with open(args.valuation) as fh:
        desc = json.load(fh)
    side = desc.get("side", "primal")
    terms = [(float(t.get("coef", 1.0)),
              ValuationSpec(int(t["j"]), load_zeta(t["zeta"]), f.dim, side))
             for t in desc["terms"]]

    def total(g):
        return sum(c * valuate(s, g) for c, s in terms)

    comps, cond = homogeneous_components(total, f, f.dim)
    table = Table(["quantity", "value", "est_error"], {"condition": cond})
    for i, c in enumerate(comps):
        table.add(f"Z_{i}", c, 0.0)
    table.add("sum", float(np.sum(comps)), abs(float(np.sum(comps))
                                                - total(f)))
    _emit(table.render(args.json), args.out)


def cmd_recover(args):
    if args.synthesize_from:
        zeta = load_zeta(args.synthesize_from)
        t = acceptance.recovery_grid(zeta.support)
        prof = ZetaProfile.from_samples(t, cone_values(zeta, args.n, t),
                                        zeta.support)
        write_profile(prof, args.out or "/dev/stdout", header="t,value")
        return
    if not args.cone_values:
        raise UsageError("--cone-values or --synthesize-from is required")
    zvals = read_profile(args.cone_values)
    rec = recover_zeta_from_cone_values(zvals, args.n)
    table = Table(["s", "value"], {
        k: rec.meta[k] for k in ("limit", "limit_target", "limit_gap",
                                 "edge_product")})
    if args.reference:
        ref = load_zeta(args.reference)
        s = rec.s[(rec.s >= args.gap_from) & (rec.s <= ref.support)]
        table.meta["sup_gap"] = float(np.max(np.abs(rec(s) - ref(s))))
    for s, v in zip(rec.s, rec.values):
        table.add(s, v)
    _emit(table.render(args.json), args.out)


def cmd_abel(args):
    xi = load_zeta(args.input)
    if args.points:
        s = np.array([float(v) for v in args.points.split(",")])
    elif xi.sampled:
        s = np.asarray(xi.s)
    else:
        s = np.linspace(0.0, xi.support, 201)
    vals = abel_forward(xi, s) if args.direction == "forward" else \
        abel_inverse(xi, s)
    table = Table(["s", "value"], {"direction": args.direction,
                                   "support": xi.support})
    for a, b in zip(s, vals):
        table.add(a, b)
    _emit(table.render(args.json), args.out)


def cmd_selfcheck(args):
    numbers = FAST_SUITE if args.suite == "fast" else None
    results = acceptance.run_criteria(numbers)
    if args.json:
        print(json.dumps([{"number": r.number, "title": r.title,
                           "passed": r.passed, "seconds": r.seconds,
                           "error": r.error,
                           "rows": [list(x) for x in r.rows]}
                          for r in results], indent=1))
    else:
        for r in results:
            print(r.line())
        print(f"# {sum(r.passed for r in results)}/{len(results)} passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CERT


# ------------------------------------------------------------------ parser

def build_parser():
    p = _Parser(prog="hessval", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=_Parser)

    def common(sp, out=True):
        sp.add_argument("--json", action="store_true",
                        help="emit JSON instead of CSV")
        if out:
            sp.add_argument("--out", help="write to this file")

    sp = sub.add_parser("transform", help="Legendre, Moreau or symmetrize")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--op", required=True,
                    choices=("legendre", "moreau", "symmetrize"))
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--rotations", type=int, default=64)
    sp.add_argument("--box", help="lo:hi,... grid box for generic inputs")
    sp.add_argument("--shape", type=int, help="grid nodes per axis")
    common(sp)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("measure", help="Hessian measures of boxes")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--box", action="append", required=True,
                    help="lo:hi,... (repeatable)")
    sp.add_argument("--j", type=int)
    sp.add_argument("--mc", action="store_true",
                    help="Monte Carlo through parallel sets")
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int)
    common(sp)
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("valuate", help="evaluate a valuation")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--zeta", required=True,
                    help="CSV profile or hat|bump|gaussian[:support]")
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--side", choices=("primal", "dual"), default="primal")
    sp.add_argument("--route", default="quadrature",
                    choices=("quadrature", "closed-form", "moreau"))
    common(sp)
    sp.set_defaults(func=cmd_valuate)

    sp = sub.add_parser("decompose", help="homogeneous components")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--valuation", required=True)
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("recover-zeta", help="solve for the weight")
    sp.add_argument("--cone-values")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--reference", help="profile to report the sup-gap to")
    sp.add_argument("--gap-from", type=float, default=0.05)
    sp.add_argument("--synthesize-from",
                    help="write cone values generated from this profile")
    common(sp)
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("abel", help="Abel transform or its inverse")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--forward", dest="direction", action="store_const",
                   const="forward")
    g.add_argument("--inverse", dest="direction", action="store_const",
                   const="inverse")
    sp.add_argument("--input", required=True)
    sp.add_argument("--points", help="comma-separated evaluation points")
    common(sp)
    sp.set_defaults(func=cmd_abel)

    sp = sub.add_parser("selfcheck", help="run the acceptance battery")
    sp.add_argument("--suite", choices=("fast", "full"), default="fast")
    common(sp, out=False)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        status = args.func(args)
        return EXIT_OK if status is None else status
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as exc:
        print(f"certification failed: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_CERT
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not an error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except (HessvalError, ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main(argv=None):
    sys.exit(run(argv))
