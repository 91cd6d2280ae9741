"""Activating graphs: auxiliary factors H that make alpha(G x H) meet an upper bound.

Products with a weighted or blown-up complement are never built in full.
``alpha(G x Blup(K, m))`` equals the weighted ``alpha(G x K)`` with weights
``1 (x) m``, and theta-type values of ``Blup(K, m)`` equal the weighted
programs on ``K``, so everything runs on graphs with ``|V(G)|^2`` vertices.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GuardError
from .graphs import (Graph, Weights, blowup, ceil_weights, complement, cycle, complete, disjunctive_product,
                     empty, is_vertex_transitive, petersen, product_weights, random_graph, strong_product)
from .lp import alpha_star, fractional_packing
from .params import alpha, sigma
from .reps import OrthoRep, extract_rep
from .report import Check, check_eq, check_le, evidence
from .sdp import LOVASZ, MINUS, PLUS, TOL_FEAS, TOL_GAP, CertifiedValue, theta

THETA = "theta"
PM_FIRST = "theta_pm_first"
PM_SECOND = "theta_pm_second"

# variant -> (program for G, program for the weighted complement)
PROGRAMS = {THETA: (LOVASZ, LOVASZ), PM_FIRST: (MINUS, PLUS), PM_SECOND: (PLUS, MINUS)}

MAX_VERTICES = 100  # weighted alpha on |V(G)|^2 vertices
MAX_SIGMA_VERTICES = 36
MAX_SDP_VERTICES = 64
DIRECT_CHECK_VERTICES = 40

TOL_ALPHA = 1e-4
TOL_UNIT = 1e-5
TOL_CHAIN = 1e-5
TOL_MULT = 1e-4


def _programs(variant: str) -> tuple[str, str]:
    try:
        return PROGRAMS[variant]
    except KeyError:
        raise ValueError(f"unknown activation variant {variant!r}; choose from {tuple(PROGRAMS)}") from None


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise GuardError(f"{what} has {n} vertices, above the limit of {limit}")


@dataclass(frozen=True)
class Activation:
    variant: str
    cert: CertifiedValue
    rep: OrthoRep
    weights: Weights


def activate(g: Graph, variant: str = THETA, tol_gap: float = TOL_GAP) -> Activation:
    own, _ = _programs(variant)
    cert = theta(g, own, tol_gap=tol_gap)
    rep = extract_rep(cert)
    total = rep.value()
    if abs(total - cert.value) > TOL_UNIT:
        raise ArithmeticError(f"extracted weights sum to {total}, certified value is {cert.value}")
    return Activation(variant, cert, rep, Weights.real(rep.weights.tolist()))


def activation_weights(g: Graph, variant: str = THETA, tol_gap: float = TOL_GAP) -> Weights:
    """Vertex weights ``p(v) = <h|phi_v>^2`` from the optimal representation of ``g``."""
    return activate(g, variant, tol_gap).weights


def alpha_with_complement(g: Graph, q: Weights, max_vertices: int = MAX_VERTICES):
    """``alpha(G x (complement G, q))`` through product weights ``1 (x) q``."""
    _guard(g.n * g.n, max_vertices, "weighted product with the complement")
    ones = Weights.ones(g.n)
    return alpha(strong_product(g, complement(g)), product_weights(ones, q)).value


@dataclass(frozen=True)
class EqualityReport:
    variant: str
    value: float  # the variant's number of G
    weights: Weights
    alpha: float
    complement_value: float
    complement_gap: float
    alpha_residual: float
    complement_residual: float

    @property
    def passed(self) -> bool:
        return self.alpha_residual <= TOL_ALPHA and self.complement_residual <= TOL_UNIT

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "value": self.value,
            "weights": self.weights.as_floats(),
            "alpha": self.alpha,
            "complement_value": self.complement_value,
            "complement_gap": self.complement_gap,
            "alpha_residual": self.alpha_residual,
            "complement_residual": self.complement_residual,
            "pass": self.passed,
        }


def check_weighted_equality(g: Graph, variant: str = THETA, tol_gap: float = TOL_GAP,
                            max_vertices: int = MAX_VERTICES, act: Activation | None = None) -> EqualityReport:
    """Both sides of ``alpha(G x (complement G, p)) = value(G) * value'(complement G, p) = value(G)``."""
    _, other = _programs(variant)
    if act is None:
        act = activate(g, variant, tol_gap)
    a = float(alpha_with_complement(g, act.weights, max_vertices))
    comp = theta(complement(g), other, act.weights, tol_gap=tol_gap)
    return EqualityReport(
        variant=variant,
        value=act.cert.value,
        weights=act.weights,
        alpha=a,
        complement_value=comp.value,
        complement_gap=comp.gap,
        alpha_residual=abs(a - act.cert.value),
        complement_residual=abs(comp.value - 1.0),
    )


@dataclass(frozen=True)
class Level:
    level: int
    weights: tuple[int, ...]
    h_vertices: int
    alpha: int
    theta_h: float
    theta_h_gap: float
    ratio: float
    lower_bound: float
    squeeze: tuple[float, int, float]  # alpha at l*p, ceil(l*p), l*p + 1

    def checks(self, tol: float = TOL_ALPHA) -> list[bool]:
        lo, mid, hi = self.squeeze
        slack = 1e-9 * (1 + hi)
        return [self.ratio <= 1 + tol, self.ratio >= self.lower_bound - tol,
                lo <= mid + slack, mid <= hi + slack]

    @property
    def passed(self) -> bool:
        return all(self.checks())

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "weights": list(self.weights),
            "h_vertices": self.h_vertices,
            "alpha": self.alpha,
            "theta_h": self.theta_h,
            "theta_h_gap": self.theta_h_gap,
            "ratio": self.ratio,
            "lower_bound": self.lower_bound,
            "squeeze": list(self.squeeze),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ActivationReport:
    graph: str
    variant: str
    value: float
    gap: float
    weights: Weights
    levels: tuple[Level, ...]
    equality: EqualityReport
    tol_gap: float = TOL_GAP

    @property
    def passed(self) -> bool:
        return self.equality.passed and all(lv.passed for lv in self.levels)

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "variant": self.variant,
            "value": self.value,
            "gap": self.gap,
            "weights": self.weights.as_floats(),
            "levels": [lv.to_json() for lv in self.levels],
            "equality": self.equality.to_json(),
            "tolerances": {"gap": self.tol_gap, "feasibility": TOL_FEAS, "alpha": TOL_ALPHA, "unit": TOL_UNIT},
            "pass": self.passed,
        }


def activation_series(g: Graph, levels, variant: str = THETA, name: str = "G", tol_gap: float = TOL_GAP,
                      max_vertices: int = MAX_VERTICES) -> ActivationReport:
    """Blow-ups ``H_l = Blup(complement G, ceil(l p))`` and how close they come to the bound.

    ``ratio = alpha(G x H_l) / (value(G) value'(H_l))`` must lie between
    ``1 - n^2 / (value(G) value'(H_l))`` and 1.
    """
    levels = [int(lv) for lv in levels]
    if any(lv < 1 for lv in levels):
        raise ValueError("levels must be positive integers")
    _, other = _programs(variant)
    _guard(g.n * g.n, max_vertices, "weighted product with the complement")
    act = activate(g, variant, tol_gap)
    equality = check_weighted_equality(g, variant, tol_gap, max_vertices, act)
    gc = complement(g)
    p = act.weights
    records = []
    for lv in levels:
        m = ceil_weights(p, lv)
        if not any(m.values):
            raise GuardError(f"level {lv} gives an empty blow-up")
        a = alpha_with_complement(g, m, max_vertices)
        th = theta(gc, other, m, tol_gap=tol_gap)
        bound = act.cert.value * th.value
        lo = alpha_with_complement(g, p.scaled(lv), max_vertices)
        hi = alpha_with_complement(g, p.scaled(lv).shifted(1), max_vertices)
        records.append(Level(
            level=lv,
            weights=tuple(int(x) for x in m.values),
            h_vertices=int(m.total()),
            alpha=int(a),
            theta_h=th.value,
            theta_h_gap=th.gap,
            ratio=float(a) / bound,
            lower_bound=1.0 - g.n ** 2 / bound,
            squeeze=(float(lo), int(a), float(hi)),
        ))
    return ActivationReport(name, variant, act.cert.value, act.cert.gap, p, tuple(records), equality, tol_gap)


@dataclass(frozen=True)
class RosenfeldWitness:
    graph: str
    packing: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]
    denominator: int
    h: Graph
    alpha_product: int
    alpha_h: int
    alpha_star: Fraction
    residual: Fraction
    direct: bool  # True when the blown-up product was also solved directly

    @property
    def passed(self) -> bool:
        return self.residual == 0 and self.alpha_h <= self.denominator

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "packing": list(self.packing),
            "multiplicities": list(self.multiplicities),
            "denominator": self.denominator,
            "h_vertices": self.h.n,
            "h_edges": self.h.edge_count,
            "alpha_product": self.alpha_product,
            "alpha_h": self.alpha_h,
            "alpha_star": self.alpha_star,
            "residual": self.residual,
            "direct_check": self.direct,
            "pass": self.passed,
        }


def rosenfeld_construct(g: Graph, name: str = "G", max_vertices: int = MAX_VERTICES,
                        direct_limit: int = DIRECT_CHECK_VERTICES) -> RosenfeldWitness:
    """Blow-up of the complement by an optimal rational packing, with exact equality check.

    With ``t = n / N`` an optimal packing, ``H' = Blup(complement G, n)``
    satisfies ``alpha(G x H') = alpha*(G) alpha(H')``.
    """
    if g.n == 0:
        raise ValueError("graph has no vertices")
    _guard(g.n * g.n, max_vertices, "weighted product with the complement")
    fp = fractional_packing(g)
    den = math.lcm(*(t.denominator for t in fp.packing))
    mult = tuple(int(t * den) for t in fp.packing)
    m = Weights([Fraction(k) for k in mult], exact=True)
    gc = complement(g)
    h = blowup(gc, m)
    a_h = alpha(gc, m).value
    a_prod = alpha_with_complement(g, m, max_vertices)
    direct = g.n * h.n <= direct_limit
    if direct:
        if alpha(h).value != a_h or alpha(strong_product(g, h)).value != a_prod:
            raise ArithmeticError("blow-up transfer disagrees with the direct computation")
    residual = a_prod - fp.value * a_h
    return RosenfeldWitness(name, fp.packing, mult, den, h, int(a_prod), int(a_h), fp.value, residual, direct)


@dataclass(frozen=True)
class HalesReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)


def hales_check(g: Graph, h: Graph, tol: float = TOL_CHAIN, max_vertices: int = MAX_SIGMA_VERTICES,
                label: str = "") -> HalesReport:
    """Clique-cover lower bounds for products, both sides computed."""
    _guard(g.n * h.n, max_vertices, "product")
    tag = f"[{label}] " if label else ""
    s_strong = sigma(strong_product(g, h)).value
    s_disj = sigma(disjunctive_product(g, h)).value
    s_h = sigma(h).value
    th_g, th_h = theta(g).value, theta(h).value
    tp_g, tm_h = theta(g, PLUS).value, theta(h, MINUS).value
    checks = (
        check_le(f"{tag}alpha*(G) sigma(H) <= sigma(G x H)", "clique covers of strong products",
                 alpha_star(g) * s_h, Fraction(s_strong)),
        check_le(f"{tag}theta(G) theta(H) <= sigma(G * H)", "clique covers of disjunctive products",
                 th_g * th_h, s_disj, tol),
        check_le(f"{tag}theta+(G) theta-(H) <= sigma(G * H)", "clique covers of disjunctive products",
                 tp_g * tm_h, s_disj, tol),
    )
    return HalesReport(checks)


@dataclass(frozen=True)
class ZetaProbe:
    ratio: Fraction  # sigma(g * h) / sigma(h)
    sigma_product: int
    sigma_h: int
    lower: float  # theta(g) theta(h) / sigma(h)
    upper: int  # sigma(g), since sigma(g * h) <= sigma(g) sigma(h)

    def to_json(self) -> dict:
        return {"ratio": self.ratio, "sigma_product": self.sigma_product, "sigma_h": self.sigma_h,
                "lower": self.lower, "upper": self.upper}


def zeta_probe(g: Graph, h: Graph, max_vertices: int = MAX_SIGMA_VERTICES) -> ZetaProbe:
    """One finite probe ``sigma(g * h) / sigma(h)``; says nothing about the infimum."""
    _guard(g.n * h.n, max_vertices, "product")
    sp = sigma(disjunctive_product(g, h)).value
    sh = sigma(h).value
    lower = theta(g).value * theta(h).value / sh
    return ZetaProbe(Fraction(sp, sh), sp, sh, lower, sigma(g).value)


# ---------------------------------------------------------------- battery

DEFAULT_LEVELS = (1, 2, 4, 8)


def default_suite(seed: int = 0):
    """Named graphs, seeded G(n, 1/2) for n = 5..8, and pairs small enough for exact products."""
    graphs = [("C5", cycle(5)), ("C7", cycle(7)), ("Petersen", petersen()), ("K5", complete(5)), ("E5", empty(5))]
    for n in range(5, 9):
        graphs.append((f"G({n},1/2)#{seed + n}", random_graph(n, 0.5, seed + n)))
    names = [nm for nm, _ in graphs]
    pairs = [("C5", "C5"), ("C5", names[5]), (names[5], names[6]), (names[6], "C5"), ("K5", names[6])]
    return graphs, pairs


@dataclass
class _Part:
    graphs: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    series: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)


def _values(g: Graph, tol_gap: float) -> dict:
    certs = {v: theta(g, v, tol_gap=tol_gap) for v in (MINUS, LOVASZ, PLUS)}
    return {
        "alpha": alpha(g).value,
        "theta_minus": certs[MINUS].value,
        "theta": certs[LOVASZ].value,
        "theta_plus": certs[PLUS].value,
        "alpha_star": alpha_star(g),
        "sigma": sigma(g).value,
        "gaps": {v: c.gap for v, c in certs.items()},
    }


def _graph_task(args) -> _Part:
    name, g, levels, tol_gap, max_vertices = args
    out = _Part()
    vals = _values(g, tol_gap)
    vt = is_vertex_transitive(g)
    out.graphs.append({"name": name, "n": g.n, "edges": [list(e) for e in g.edges()],
                       "vertex_transitive": vt, **vals})
    chain = [("alpha", vals["alpha"]), ("theta-", vals["theta_minus"]), ("theta", vals["theta"]),
             ("theta+", vals["theta_plus"]), ("alpha*", vals["alpha_star"]), ("sigma", vals["sigma"])]
    for (ln, lv), (rn, rv) in zip(chain, chain[1:]):
        out.checks.append(check_le(f"[{name}] {ln} <= {rn}", "sandwich chain", float(lv), float(rv), TOL_CHAIN))

    if g.n * g.n > max_vertices:
        return out
    gc = complement(g)
    if vt:
        a = alpha(strong_product(g, gc)).value
        out.checks.append(check_eq(f"[{name}] alpha(G x Gbar) = |V|", "vertex-transitive activation",
                                   int(a), g.n))
        tg = vals["theta"] * theta(gc, tol_gap=tol_gap).value
        out.checks.append(check_eq(f"[{name}] theta(G) theta(Gbar) = |V|", "vertex-transitive activation",
                                   tg, g.n, TOL_ALPHA))
        tpm = vals["theta_minus"] * theta(gc, PLUS, tol_gap=tol_gap).value
        out.checks.append(check_eq(f"[{name}] theta-(G) theta+(Gbar) = |V|", "vertex-transitive activation",
                                   tpm, g.n, TOL_ALPHA))
    for variant in PROGRAMS:
        rep = check_weighted_equality(g, variant, tol_gap, max_vertices)
        out.checks.append(check_eq(f"[{name}] {variant}: alpha(G x (Gbar,p)) = value(G)",
                                   "activation by the weighted complement", rep.alpha, rep.value, TOL_ALPHA))
        out.checks.append(check_eq(f"[{name}] {variant}: value'(Gbar,p) = 1",
                                   "activation by the weighted complement", rep.complement_value, 1.0, TOL_UNIT))
    if levels:
        series = activation_series(g, levels, THETA, name, tol_gap, max_vertices)
        out.series.append(series.to_json())
        for lv in series.levels:
            out.checks.append(Check(f"[{name}] series level {lv.level}", "blow-up series bounds",
                                    lv.ratio, lv.lower_bound, 1.0 - lv.ratio, lv.passed))
    w = rosenfeld_construct(g, name, max_vertices)
    out.witnesses.append(w.to_json())
    out.checks.append(check_eq(f"[{name}] alpha(G x H') = alpha*(G) alpha(H')", "exact fractional activation",
                               Fraction(w.alpha_product), w.alpha_star * w.alpha_h))
    return out


def _pair_task(args) -> _Part:
    gname, g, hname, h, tol_gap, max_sigma = args
    tag = f"[{gname}, {hname}]"
    _guard(g.n * h.n, MAX_SDP_VERTICES, "product")
    out = _Part()
    strong, disj = strong_product(g, h), disjunctive_product(g, h)
    th = {v: (theta(g, v, tol_gap=tol_gap).value, theta(h, v, tol_gap=tol_gap).value) for v in (MINUS, LOVASZ, PLUS)}
    t_s = theta(strong, tol_gap=tol_gap).value
    t_d = theta(disj, tol_gap=tol_gap).value
    tm_s = theta(strong, MINUS, tol_gap=tol_gap).value
    tp_s = theta(strong, PLUS, tol_gap=tol_gap).value
    tp_d = theta(disj, PLUS, tol_gap=tol_gap).value
    tg, thh = th[LOVASZ]
    add = out.checks.append
    add(check_eq(f"{tag} theta(G x H) = theta(G) theta(H)", "theta multiplicative", t_s, tg * thh, TOL_MULT, True))
    add(check_eq(f"{tag} theta(G * H) = theta(G) theta(H)", "theta multiplicative", t_d, tg * thh, TOL_MULT, True))
    add(check_eq(f"{tag} alpha*(G x H) = alpha*(G) alpha*(H)", "fractional packing multiplicative",
                 alpha_star(strong), alpha_star(g) * alpha_star(h)))
    a_d = alpha(disj).value
    add(check_eq(f"{tag} alpha(G * H) = alpha(G) alpha(H)", "alpha multiplicative under disjunctive product",
                 a_d, alpha(g).value * alpha(h).value))
    a_s = alpha(strong).value
    mixed = th[MINUS][0] * th[PLUS][1]
    add(check_le(f"{tag} alpha(G x H) <= theta-(G x H)", "mixed product chain", float(a_s), tm_s, TOL_CHAIN))
    add(check_le(f"{tag} theta-(G x H) <= theta-(G) theta+(H)", "mixed product chain", tm_s, mixed, TOL_CHAIN))
    add(check_le(f"{tag} theta-(G) theta+(H) <= theta+(G * H)", "mixed product chain", mixed, tp_d, TOL_CHAIN))
    add(check_le(f"{tag} theta-(G) theta-(H) <= theta-(G x H)", "one-sided product bound",
                 th[MINUS][0] * th[MINUS][1], tm_s, TOL_CHAIN))
    add(check_le(f"{tag} theta+(G * H) <= theta+(G) theta+(H)", "one-sided product bound",
                 tp_d, th[PLUS][0] * th[PLUS][1], TOL_CHAIN))
    add(evidence(f"{tag} theta+(G x H) vs theta+(G) theta+(H)", "conjectured multiplicativity, not asserted",
                 tp_s, th[PLUS][0] * th[PLUS][1]))
    if g.n * h.n <= max_sigma:
        out.checks.extend(hales_check(g, h, max_vertices=max_sigma, label=f"{gname}, {hname}").checks)
        z = zeta_probe(g, h, max_sigma)
        add(check_le(f"{tag} theta(G) theta(H) / sigma(H) <= sigma(G * H) / sigma(H)", "finite ratio probe",
                     z.lower, float(z.ratio), TOL_CHAIN))
    return out


def _run(fn, items, workers: int):
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def duality_battery(graphs, pairs=(), levels=DEFAULT_LEVELS, seed: int | None = None, tol_gap: float = TOL_GAP,
                    max_vertices: int = MAX_VERTICES, max_sigma_vertices: int = MAX_SIGMA_VERTICES,
                    workers: int = 1) -> dict:
    """Run every check on ``graphs`` (name, Graph) and ``pairs`` (two names or two indices).

    Failures are recorded in the report rather than raised.  The document
    depends only on the inputs, not on ``workers``.
    """
    from importlib.metadata import PackageNotFoundError, version

    graphs = list(graphs)
    lookup = {name: (name, g) for name, g in graphs}

    def resolve(key):
        return graphs[key] if isinstance(key, int) else lookup[key]

    g_items = [(name, g, tuple(levels), tol_gap, max_vertices) for name, g in graphs]
    p_items = []
    for a, b in pairs:
        (an, ag), (bn, bg) = resolve(a), resolve(b)
        p_items.append((an, ag, bn, bg, tol_gap, max_sigma_vertices))
    parts = _run(_safe(_graph_task), g_items, workers) + _run(_safe(_pair_task), p_items, workers)

    try:
        ver = version("artifact")
    except PackageNotFoundError:
        ver = "unknown"
    doc = {
        "meta": {
            "version": ver,
            "tolerances": {"gap": tol_gap, "feasibility": TOL_FEAS, "chain": TOL_CHAIN,
                           "multiplicativity": TOL_MULT, "alpha": TOL_ALPHA, "unit": TOL_UNIT},
            "seed": seed,
        },
        "graphs": [], "checks": [], "series": [], "witnesses": [],
    }
    for part in parts:
        doc["graphs"].extend(part.graphs)
        doc["checks"].extend(c.to_json() for c in part.checks)
        doc["series"].extend(part.series)
        doc["witnesses"].extend(part.witnesses)
    return doc


class _safe:
    """Turn an exception inside one battery item into a failed check."""

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, args):
        try:
            return self.fn(args)
        except Exception as exc:  # recorded, the battery goes on
            label = args[0] if len(args) < 6 else f"{args[0]}, {args[2]}"
            part = _Part()
            part.checks.append(Check(f"[{label}] {self.fn.__name__.strip('_')}", "battery item",
                                     None, None, f"{type(exc).__name__}: {exc}", False))
            return part


def battery_passed(doc: dict) -> bool:
    return all(c["pass"] is not False for c in doc["checks"])
