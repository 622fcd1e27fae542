"""Command-line front end.

    adomian gen --expr "exp(u)" --order 3 --method rach
    adomian gen --expr "u^2*conj(u)" --order 3 --method fourier --random --seed 1 --format json
    adomian check --expr "ln(u)" --order 4 --trials 20 --tol 1e-9
    adomian solve schrodinger --alpha 0.5 --terms 8 --eval-at 0 0.1

Exit status: 0 success, 2 parse or input error, 3 domain error,
4 method unsupported for the input, 5 backend discrepancy above tolerance.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

import numpy as np

from adomian import __version__
from adomian import expr as ex
from adomian.components import (
    direct_spread,
    random_components,
    read_components,
    recursive_spread,
)
from adomian.exceptions import (
    AccuracyError,
    CostError,
    DomainError,
    EvaluationError,
    OrderError,
    ParseError,
    SingularDenominatorError,
    UnsupportedError,
)
from adomian.fourier import QuadratureConfig, gen_fourier_direct, gen_fourier_recursive
from adomian.fractional import solve_schrodinger
from adomian.generators import adomian_sequence
from adomian.poly import AdomianPoly

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_UNSUPPORTED = 4
EXIT_DISCREPANCY = 5

SYMBOLIC = ("rach", "recursive", "structural")
NUMERIC = ("fourier", "fourier-recursive")
SCHEMA = 1


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _fail(message, code):
    raise CliError(message, code)


# ---------------------------------------------------------------------------
# shared helpers


def _parse_expr(text):
    try:
        return ex.parse(text)
    except ParseError as exc:
        _fail(f"parse error: {exc}", EXIT_PARSE)


def _config(args):
    try:
        kw = dict(nodes=args.nodes, rtol=args.rtol, recursive_nodes=args.recursive_nodes)
        if args.max_nodes is not None:
            kw["max_nodes"] = args.max_nodes
        return QuadratureConfig(**kw)
    except ValueError as exc:
        _fail(f"bad quadrature settings: {exc}", EXIT_PARSE)


def _manifest(args, command, **extra):
    out = {
        "command": command,
        "expression": getattr(args, "expr", None),
        "method": getattr(args, "method", None),
        "order": getattr(args, "order", None),
        "quadrature": None,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        # left null unless asked for, so identical runs give identical bytes
        "timestamp": (
            datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
            if getattr(args, "timestamp", False) else None
        ),
    }
    out.update(extra)
    return out


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _complex_str(z):
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or z.imag != z.imag else '-'}{abs(z.imag)!r}j"


def _emit(doc, fmt, text_lines, out):
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _univariate(N, what):
    names = ex.base_names(N)
    if len(names) > 1:
        _fail(f"{what} takes a single-variable expression; got {', '.join(names)}", EXIT_UNSUPPORTED)
    return names[0] if names else "u"


def _load_components(args, N, n):
    var = _univariate(N, "numeric evaluation")
    if args.components:
        try:
            cs = read_components(args.components, var=var)
        except (OSError, ValueError) as exc:
            _fail(f"components file: {exc}", EXIT_PARSE)
        if cs.order < n:
            _fail(f"components file has orders 0..{cs.order}, need 0..{n}", EXIT_PARSE)
        return cs
    if args.random:
        if args.seed is None:
            args.seed = 0
        rng = np.random.default_rng(args.seed)
        if args.method == "fourier-recursive":
            return random_components(n, rng, var=var, spread=lambda v: recursive_spread(v, n), margin=0.25)
        spread = direct_spread if ex.has_singular_nodes(N) else None
        return random_components(n, rng, var=var, spread=spread)
    _fail("numeric methods need --components FILE or --random", EXIT_PARSE)


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args, out=sys.stdout):
    N = _parse_expr(args.expr)
    n = args.order
    if n < 0:
        _fail("order must be >= 0", EXIT_PARSE)
    if args.method in SYMBOLIC:
        seq = adomian_sequence(N, n, args.method, args.mode)
        doc = {
            "schema": SCHEMA,
            "manifest": _manifest(args, "gen", mode=args.mode),
            "polynomials": [{"order": k, "terms": a.to_json()} for k, a in enumerate(seq)],
        }
        lines = [f"A_{k} = {a}" for k, a in enumerate(seq)]
        _emit(doc, args.format, lines, out)
        return EXIT_OK
    config = _config(args)
    cs = _load_components(args, N, n)
    gen = gen_fourier_direct if args.method == "fourier" else gen_fourier_recursive
    values = [gen(N, cs, k, config) for k in range(n + 1)]
    doc = {
        "schema": SCHEMA,
        "manifest": _manifest(
            args, "gen",
            quadrature=config.as_dict(),
            components=[_pair(z) for z in cs.u],
            conjugates=[_pair(z) for z in cs.ubar],
        ),
        "polynomials": [{"order": k, "value": _pair(v)} for k, v in enumerate(values)],
    }
    lines = [f"A_{k} = {_complex_str(v)}" for k, v in enumerate(values)]
    _emit(doc, args.format, lines, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def _relative(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.abs(a - b) / np.maximum(np.abs(b), np.finfo(float).tiny)


def cmd_check(args, out=sys.stdout):
    N = _parse_expr(args.expr)
    n = args.order
    var = _univariate(N, "check")
    config = _config(args)
    rng = np.random.default_rng(args.seed)
    singular = ex.has_singular_nodes(N)
    lines = []

    symbolic = {}
    for method in SYMBOLIC:
        try:
            symbolic[method] = adomian_sequence(N, n, method)
        except UnsupportedError as exc:
            lines.append(f"note: {method} skipped ({exc})")
    if not symbolic:
        _fail("no symbolic backend applies", EXIT_UNSUPPORTED)
    ref_name = next(iter(symbolic))

    cs = random_components(n, rng, size=args.trials, var=var,
                           spread=direct_spread if singular else None)
    ref = np.stack([np.broadcast_to(a.evaluate(cs), (args.trials,)) for a in symbolic[ref_name]])
    worst = {}
    for method, seq in symbolic.items():
        if method == ref_name:
            continue
        vals = np.stack([np.broadcast_to(a.evaluate(cs), (args.trials,)) for a in seq])
        worst[method] = (_relative(vals, ref), vals, ref)
    vals = np.stack([np.broadcast_to(gen_fourier_direct(N, cs, k, config), (args.trials,))
                     for k in range(n + 1)])
    worst["fourier"] = (_relative(vals, ref), vals, ref)

    rn = min(n, args.recursive_max_order)
    if rn < n:
        lines.append(f"note: fourier-recursive limited to orders <= {rn}")
    # nested shifts inflate the argument spread, so the recursive set is always
    # scaled (also for entire N, where it keeps the quadrature cheap)
    rcs = random_components(rn, rng, size=args.trials, var=var,
                            spread=lambda v: recursive_spread(v, rn), margin=0.25)
    rref = np.stack([np.broadcast_to(a.evaluate(rcs), (args.trials,)) for a in symbolic[ref_name][: rn + 1]])
    try:
        rvals = np.stack([np.broadcast_to(gen_fourier_recursive(N, rcs, k, config), (args.trials,))
                          for k in range(rn + 1)])
        worst["fourier-recursive"] = (_relative(rvals, rref), rvals, rref)
    except CostError as exc:
        lines.append(f"note: fourier-recursive skipped ({exc})")

    overall = 0.0
    detail = None
    lines.append(f"reference: {ref_name}; {args.trials} trials; orders 0..{n}")
    for method, (rel, vals, r) in worst.items():
        k, t = np.unravel_index(np.argmax(rel), rel.shape)
        m = float(rel[k, t])
        lines.append(
            f"{method:18s} max rel {m:.3e} at A_{k}, trial {t}: "
            f"{_complex_str(vals[k, t])} vs {_complex_str(r[k, t])}"
        )
        if m >= overall:
            overall, detail = m, (method, int(k), int(t))
    ok = overall <= args.tol
    lines.append(f"{'PASS' if ok else 'FAIL'}: max relative discrepancy {overall:.3e} (tol {args.tol:g})")
    if not ok:
        method, k, t = detail
        lines.append(f"worst case: {method}, A_{k}, trial {t}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_DISCREPANCY


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args, out=sys.stdout):
    if not 0 < args.alpha <= 1:
        _fail(f"alpha must lie in (0, 1], got {args.alpha}", EXIT_DOMAIN)
    if args.terms < 1:
        _fail("terms must be >= 1", EXIT_DOMAIN)
    state = solve_schrodinger(args.alpha, args.terms - 1)
    closed = state.closed_form()
    rel = _relative(state.coeffs, closed)
    lines = [f"alpha = {args.alpha!r}", "n  c_n  (i/2)^n/Gamma(n alpha+1)  rel.diff"]
    for k, (c, z, r) in enumerate(zip(state.coeffs, closed, rel)):
        lines.append(f"{k}  {_complex_str(c)}  {_complex_str(z)}  {r:.3e}")
    doc = {
        "schema": SCHEMA,
        "manifest": _manifest(args, "solve", problem=args.problem, alpha=args.alpha, terms=args.terms),
        "coefficients": [_pair(c) for c in state.coeffs],
        "closed_form": [_pair(z) for z in closed],
    }
    if args.eval_at is not None:
        x, t = args.eval_at
        if t < 0:
            _fail("t must be >= 0", EXIT_DOMAIN)
        s = state.partial_sum(x, t)
        e = state.mittag_leffler_value(x, t)
        lines.append(f"partial sum at (x={x!r}, t={t!r}): {_complex_str(s)}")
        lines.append(f"e^(ix) E_alpha(i t^alpha/2), {args.terms} terms: {_complex_str(e)}")
        lines.append(f"abs diff {abs(s - e):.3e}")
        doc["evaluation"] = {"x": x, "t": t, "partial_sum": _pair(s), "mittag_leffler": _pair(e)}
    _emit(doc, args.format, lines, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_quadrature(p):
    g = p.add_argument_group("quadrature")
    g.add_argument("--nodes", type=int, default=64, help="initial node count (power of two)")
    g.add_argument("--max-nodes", type=int, default=None,
                   help="adaptive cap (default $ADOMIAN_QUAD_MAX_M or 65536)")
    g.add_argument("--rtol", type=float, default=1e-12)
    g.add_argument("--recursive-nodes", type=int, default=32, help="nodes per level, recursive method")


def build_parser():
    parser = argparse.ArgumentParser(prog="adomian", description="Adomian polynomial generator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate A_0..A_n")
    g.add_argument("--expr", required=True, help='nonlinearity, e.g. "exp(u)" or "u^2*conj(u)"')
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--method", choices=SYMBOLIC + NUMERIC, default="rach")
    g.add_argument("--mode", choices=("substituted", "opaque"), default="substituted",
                   help="symbolic methods: keep N^(k)(u0) opaque or substitute N")
    g.add_argument("--format", choices=("text", "json"), default="text")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--components", metavar="FILE", help="component values, one 're im [cre cim]' per line")
    src.add_argument("--random", action="store_true", help="random guarded components")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--timestamp", action="store_true", help="record wall-clock time in the manifest")
    _add_quadrature(g)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="cross-check all applicable backends")
    c.add_argument("--expr", required=True)
    c.add_argument("--order", type=int, default=4)
    c.add_argument("--trials", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--recursive-max-order", type=int, default=4)
    _add_quadrature(c)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", help="decomposition solve of a model problem")
    s.add_argument("problem", choices=("schrodinger",))
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--terms", type=int, default=8, help="number of coefficients c_0..c_{terms-1}")
    s.add_argument("--eval-at", nargs=2, type=float, metavar=("X", "T"))
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--timestamp", action="store_true")
    s.set_defaults(func=cmd_solve)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CostError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (DomainError, EvaluationError, SingularDenominatorError, AccuracyError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def load_output(text):
    """Parse JSON emitted by ``gen``: symbolic polynomials or complex values."""
    doc = json.loads(text)
    out = []
    for p in doc["polynomials"]:
        if "terms" in p:
            out.append(AdomianPoly.from_json(p["terms"]))
        else:
            out.append(complex(*p["value"]))
    return doc, out


if __name__ == "__main__":
    sys.exit(main())
