"""Command-line front end: ``gal <subcommand> ...``.

Exit status: 0 success, 1 a check failed, 2 usage error, 3 size guard,
4 solver failure, 5 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import activation as act
from .errors import GuardError, SolverError
from .graphs import FAMILIES, Weights, blowup, complement, disjunctive_product, generate, strong_product
from .io import GraphFormatError, parse_graph, write_graph
from .lp import fractional_packing
from .params import alpha, chi, sigma
from .report import dumps, encode
from .sdp import LOVASZ, MINUS, PLUS, TOL_GAP, theta

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_GUARD, EXIT_SOLVER, EXIT_FORMAT = range(6)

PARAMS = ("theta", "theta_minus", "theta_plus", "alpha", "alpha_star", "sigma", "chi")


class UsageError(Exception):
    pass


def _read(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_graph(text)


def _emit_json(path: str | None, doc) -> None:
    if not path:
        return
    text = dumps(doc)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_graph_out(args, g, w=None) -> None:
    text = write_graph(g, w)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _levels(text: str) -> list[int]:
    try:
        levels = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must be comma-separated integers, got {text!r}") from None
    if not levels or any(x < 1 for x in levels):
        raise argparse.ArgumentTypeError("levels must be positive integers")
    return levels


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _fmt_exact(x) -> str:
    return str(x) if isinstance(x, Fraction) else f"{x:.9g}"


def cmd_gen(args) -> int:
    try:
        g = generate(args.family, *args.params, seed=args.seed)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _write_graph_out(args, g)
    return EXIT_OK


def cmd_param(args) -> int:
    g, w = _read(args.graph)
    wanted = [p for p in PARAMS if getattr(args, p)] or list(PARAMS)
    weighted = not w.is_ones()
    doc = {"graph": args.graph, "n": g.n, "weights": list(w.values), "results": {}}
    for p in wanted:
        if p in ("theta", "theta_minus", "theta_plus"):
            variant = {"theta": LOVASZ, "theta_minus": MINUS, "theta_plus": PLUS}[p]
            cert = theta(g, variant, w if weighted else None, tol_gap=args.tol_gap)
            print(f"{p} = {cert.value:.7f} (gap {cert.gap:.0e})")
            doc["results"][p] = cert.summary()
        elif p == "alpha":
            r = alpha(g, w)
            print(f"alpha = {_fmt_exact(r.value)} (witness {' '.join(map(str, r.witness))})")
            doc["results"][p] = {"value": r.value, "witness": list(r.witness)}
        elif p == "alpha_star":
            fp = fractional_packing(g, w)
            print(f"alpha_star = {fp.value} (exact, {len(fp.cliques)} clique constraints)")
            doc["results"][p] = {"value": fp.value, "packing": list(fp.packing), "cover": list(fp.cover)}
        elif p == "sigma":
            r = sigma(g)
            print(f"sigma = {r.value}")
            doc["results"][p] = {"value": r.value, "cliques": [list(c) for c in r.cliques]}
        else:
            r = chi(g)
            print(f"chi = {r.value}")
            doc["results"][p] = {"value": r.value, "colours": list(r.colours)}
    _emit_json(args.json, doc)
    return EXIT_OK


def cmd_product(args) -> int:
    (g, _), (h, _) = _read(args.first), _read(args.second)
    prod = disjunctive_product if args.disjunctive else strong_product
    if g.n * h.n > args.max_vertices:
        raise GuardError(f"product would have {g.n * h.n} vertices, above the limit of {args.max_vertices}")
    _write_graph_out(args, prod(g, h))
    return EXIT_OK


def cmd_complement(args) -> int:
    g, w = _read(args.graph)
    _write_graph_out(args, complement(g), w)
    return EXIT_OK


def cmd_blowup(args) -> int:
    g, w = _read(args.graph)
    if args.mult:
        try:
            mult = [int(x) for x in args.mult.split(",")]
        except ValueError:
            raise UsageError("--mult takes comma-separated integers") from None
        if len(mult) != g.n:
            raise UsageError(f"--mult needs {g.n} entries, got {len(mult)}")
        m = Weights([Fraction(k) for k in mult], exact=True)
    else:
        if not w.is_integral():
            raise UsageError("vertex weights are not integers; pass --mult")
        m = w
    if m.total() > args.max_vertices:
        raise GuardError(f"blow-up would have {m.total()} vertices, above the limit of {args.max_vertices}")
    try:
        h = blowup(g, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write_graph_out(args, h)
    return EXIT_OK


def cmd_activate(args) -> int:
    g, _ = _read(args.graph)
    rep = act.activation_series(g, args.levels, args.variant, name=args.graph, tol_gap=args.tol_gap,
                                max_vertices=args.max_vertices)
    eq = rep.equality
    print(f"{args.variant}: value = {rep.value:.7f}, weights sum = {sum(rep.weights.as_floats()):.7f}")
    print(f"  alpha(G x (Gbar,p)) = {eq.alpha:.7f} (residual {eq.alpha_residual:.1e}), "
          f"complement value = {eq.complement_value:.7f} (residual {eq.complement_residual:.1e})")
    for lv in rep.levels:
        print(f"  level {lv.level}: |V(H)| = {lv.h_vertices}, alpha = {lv.alpha}, ratio = {lv.ratio:.7f}, "
              f"lower bound = {lv.lower_bound:.4f} [{'ok' if lv.passed else 'FAIL'}]")
    _emit_json(args.json, rep)
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_rosenfeld(args) -> int:
    g, _ = _read(args.graph)
    w = act.rosenfeld_construct(g, name=args.graph, max_vertices=args.max_vertices)
    print(f"packing = {' '.join(str(t) for t in w.packing)} (N = {w.denominator})")
    print(f"H' has {w.h.n} vertices; alpha(H') = {w.alpha_h}, alpha*(G) = {w.alpha_star}")
    print(f"alpha(G x H') = {w.alpha_product}, residual = {w.residual}")
    _emit_json(args.json, w)
    return EXIT_OK if w.passed else EXIT_CHECK


def cmd_verify(args) -> int:
    graphs = []
    pairs: list = []
    if args.suite == "default":
        graphs, pairs = act.default_suite(args.seed)
    for path in args.graphs:
        g, _ = _read(path)
        graphs.append((path, g))
    if not graphs:
        raise UsageError("nothing to verify: give graph files or --suite default")
    doc = act.duality_battery(graphs, pairs, levels=args.levels, seed=args.seed, tol_gap=args.tol_gap,
                              max_vertices=args.max_vertices, workers=args.workers)
    failed = [c for c in doc["checks"] if c["pass"] is False]
    evidence = sum(1 for c in doc["checks"] if c["pass"] is None)
    print(f"{len(doc['checks'])} checks, {len(failed)} failed, {evidence} recorded as evidence only")
    for c in failed:
        print(f"  FAIL {c['name']}: lhs {encode(c['lhs'])}, rhs {encode(c['rhs'])}, residual {encode(c['residual'])}")
    _emit_json(args.json, doc)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_zeta(args) -> int:
    (g, _), (h, _) = _read(args.first), _read(args.second)
    z = act.zeta_probe(g, h, max_vertices=args.max_vertices)
    print(f"sigma(G * H) / sigma(H) = {z.sigma_product}/{z.sigma_h} = {float(z.ratio):.7f}")
    print(f"  theta(G) theta(H) / sigma(H) = {z.lower:.7f} <= probe <= sigma(G) = {z.upper}")
    _emit_json(args.json, z)
    return EXIT_OK if z.lower <= float(z.ratio) + act.TOL_CHAIN else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gal", description="Graph parameters, products and activating blow-ups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, guard_default):
        p.add_argument("--json", metavar="PATH", help="write a JSON report ('-' for stdout)")
        p.add_argument("--tol-gap", type=_positive_float, default=TOL_GAP,
                       help="accepted duality gap, relative to 1 + value (default %(default)g)")
        p.add_argument("--max-vertices", type=int, default=guard_default,
                       help="size guard for exact computations (default %(default)s)")

    p = sub.add_parser("gen", help="generate a graph from a named family")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("params", nargs="*", help="family parameters, e.g. n or n p")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("param", help="compute graph parameters")
    p.add_argument("graph")
    for name in PARAMS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, action="store_true")
    common(p, act.MAX_VERTICES)
    p.set_defaults(func=cmd_param)

    p = sub.add_parser("product", help="strong (default) or disjunctive product of two graphs")
    p.add_argument("first")
    p.add_argument("second")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--strong", action="store_true")
    kind.add_argument("--disjunctive", action="store_true")
    p.add_argument("--max-vertices", type=int, default=400)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("complement", help="complement graph (weights kept)")
    p.add_argument("graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("blowup", help="replace vertices by independent sets")
    p.add_argument("graph")
    p.add_argument("--mult", help="comma-separated multiplicities (default: the file's integer weights)")
    p.add_argument("--max-vertices", type=int, default=400)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("activate", help="activation weights and the blow-up series")
    p.add_argument("graph")
    p.add_argument("--variant", choices=sorted(act.PROGRAMS), default=act.THETA)
    p.add_argument("--levels", type=_levels, default=list(act.DEFAULT_LEVELS), help="e.g. 1,2,4,8")
    common(p, act.MAX_VERTICES)
    p.set_defaults(func=cmd_activate)

    p = sub.add_parser("rosenfeld", help="exact blow-up attaining the fractional packing bound")
    p.add_argument("graph")
    common(p, act.MAX_VERTICES)
    p.set_defaults(func=cmd_rosenfeld)

    p = sub.add_parser("verify", help="run the duality battery")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--suite", choices=["default", "none"], default="none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", type=_levels, default=list(act.DEFAULT_LEVELS))
    p.add_argument("--workers", type=int, default=1)
    common(p, act.MAX_VERTICES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeta", help="one probe sigma(G * H) / sigma(H)")
    p.add_argument("first")
    p.add_argument("second")
    common(p, act.MAX_SIGMA_VERTICES)
    p.set_defaults(func=cmd_zeta)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gal: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        print(f"gal: guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except SolverError as exc:
        print(f"gal: solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (GraphFormatError, OSError, UnicodeDecodeError) as exc:
        print(f"gal: input: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
