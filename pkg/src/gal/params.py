"""Exact combinatorial parameters: cliques, independence number, colourings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import GuardError
from .graphs import Graph, Weights, complement, disjunctive_product, iter_bits, power, strong_product

FLOAT_TOL = 1e-12


def clique_vertices(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def maximal_cliques(g: Graph) -> tuple[int, ...]:
    """All maximal cliques as vertex bitsets, sorted by their vertex tuples.

    Bron-Kerbosch with Tomita pivoting.
    """
    adj = g.adj
    found: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(r)
            return
        pivot = max(iter_bits(p | x), key=lambda u: ((p & adj[u]).bit_count(), -u))
        for v in iter_bits(p & ~adj[pivot]):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if g.n:
        expand(0, (1 << g.n) - 1, 0)
    return tuple(sorted(found, key=clique_vertices))


@dataclass(frozen=True)
class AlphaResult:
    value: object  # Fraction for exact weights, float otherwise
    witness: tuple[int, ...]


def _integer_scale(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for x in values:
        den = math.lcm(den, x.denominator)
    return [int(x * den) for x in values], den


def _mwis(adj: Sequence[int], w: Sequence, tol) -> tuple[object, list[int]]:
    """Maximum-weight independent set by branch and bound.

    Vertices are assumed pre-sorted into branching order (index order).  The
    bound is a greedy clique cover of the candidates, where each clique
    contributes its heaviest vertex.
    """
    n = len(adj)
    closed = [adj[v] | (1 << v) for v in range(n)]

    chosen: list[int] = []
    taken = 0
    for v in sorted(range(n), key=lambda v: (-w[v], v)):
        if not taken >> v & 1:
            chosen.append(v)
            taken |= closed[v]
    best_val = sum(w[v] for v in chosen)
    best_set = list(chosen)

    def cover(p: int):
        order = []
        bounds = []
        base = 0
        while p:
            low = p & -p
            u = low.bit_length() - 1
            p ^= low
            members = [u]
            cand = p & adj[u]
            while cand:
                lw = cand & -cand
                x = lw.bit_length() - 1
                members.append(x)
                p ^= lw
                cand &= adj[x]
            members.sort(key=lambda v: (w[v], v))
            for v in members:
                order.append(v)
                bounds.append(base + w[v])
            base += w[members[-1]]
        return order, bounds

    def expand(p: int, cur, stack: list[int]) -> None:
        nonlocal best_val, best_set
        order, bounds = cover(p)
        for i in range(len(order) - 1, -1, -1):
            if cur + bounds[i] <= best_val + tol:
                return
            v = order[i]
            stack.append(v)
            rest = p & ~closed[v]
            val = cur + w[v]
            if rest:
                expand(rest, val, stack)
            elif val > best_val + tol:
                best_val = val
                best_set = list(stack)
            stack.pop()
            p &= ~(1 << v)

    if n:
        expand((1 << n) - 1, 0, [])
    return best_val, best_set


def alpha(g: Graph, p: Weights | None = None) -> AlphaResult:
    """(Weighted) independence number with a maximum-weight witness.

    Exact weights give an exact ``Fraction``; real weights give the float
    sum of the witness weights.
    """
    if p is None:
        p = Weights.ones(g.n)
    if len(p) != g.n:
        raise ValueError("one weight per vertex required")
    active = [v for v in range(g.n) if p[v] > 0]
    if not active:
        zero = Fraction(0) if p.exact else 0.0
        return AlphaResult(zero, ())
    deg = {v: (g.adj[v]).bit_count() for v in active}
    order = sorted(active, key=lambda v: (-deg[v], v))
    pos = {v: i for i, v in enumerate(order)}
    mask_active = sum(1 << v for v in active)
    adj = []
    for v in order:
        row = 0
        for u in iter_bits(g.adj[v] & mask_active):
            row |= 1 << pos[u]
        adj.append(row)
    if p.exact:
        ints, den = _integer_scale([p[v] for v in order])
        val, sol = _mwis(adj, ints, 0)
        witness = tuple(sorted(order[i] for i in sol))
        value = Fraction(val, den)
    else:
        vals = [float(p[v]) for v in order]
        _, sol = _mwis(adj, vals, FLOAT_TOL)
        witness = tuple(sorted(order[i] for i in sol))
        value = math.fsum(vals[pos[v]] for v in witness)
    if not g.is_independent(witness):
        raise AssertionError("alpha witness is not independent")
    return AlphaResult(value, witness)


def clique_number(g: Graph) -> AlphaResult:
    return alpha(complement(g))


@dataclass(frozen=True)
class Colouring:
    value: int
    colours: tuple[int, ...]

    def classes(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.value)]
        for v, c in enumerate(self.colours):
            out[c].append(v)
        return [tuple(c) for c in out]


def _dsatur_greedy(g: Graph) -> list[int]:
    n = g.n
    colour = [-1] * n
    seen = [0] * n
    for _ in range(n):
        v = max((u for u in range(n) if colour[u] < 0), key=lambda u: (seen[u].bit_count(), g.degree(u), -u))
        c = 0
        while seen[v] >> c & 1:
            c += 1
        colour[v] = c
        for u in iter_bits(g.adj[v]):
            seen[u] |= 1 << c
    return colour


def _check_colouring(g: Graph, colours: Sequence[int]) -> None:
    for u, v in g.edges():
        if colours[u] == colours[v]:
            raise AssertionError(f"improper colouring on edge ({u}, {v})")


class _Budget(Exception):
    pass


def _chi_by_cover(g: Graph, lower: int) -> list[int]:
    """Minimum cover by maximal independent sets, as a 0/1 program for HiGHS."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    sets = maximal_cliques(complement(g))
    a = np.array([[s >> v & 1 for s in sets] for v in range(g.n)], dtype=float)
    res = milp(np.ones(len(sets)), constraints=LinearConstraint(a, lb=1),
               integrality=np.ones(len(sets)), bounds=Bounds(0, 1))
    if res.status != 0:
        raise ArithmeticError(f"set-cover program failed: {res.message}")
    chosen = [sets[i] for i in np.flatnonzero(res.x > 0.5)]
    proven = max(lower, math.ceil(res.mip_dual_bound - 1e-6))
    if len(chosen) != proven:
        raise ArithmeticError(f"cover of size {len(chosen)} not proven optimal (bound {proven})")
    colours = [-1] * g.n
    for c, s in enumerate(chosen):
        for v in iter_bits(s):
            if colours[v] < 0:
                colours[v] = c
    return colours


def chi(g: Graph, node_limit: int = 50_000) -> Colouring:
    """Exact chromatic number by DSATUR branch and bound.

    A maximum clique is coloured first; it also gives the lower bound.  If
    the search visits more than ``node_limit`` nodes, the minimum cover by
    maximal independent sets is solved as an integer program instead.
    """
    n = g.n
    if n == 0:
        return Colouring(0, ())
    greedy = _dsatur_greedy(g)
    best = max(greedy) + 1
    best_col = list(greedy)
    clique = clique_number(g).witness
    lower = len(clique)
    if best > lower:
        adj = g.adj
        colour = [-1] * n
        count = [[0] * n for _ in range(n)]
        seen = [0] * n
        uncoloured = (1 << n) - 1

        def assign(v: int, c: int) -> None:
            nonlocal uncoloured
            colour[v] = c
            uncoloured &= ~(1 << v)
            for u in iter_bits(adj[v]):
                count[u][c] += 1
                if count[u][c] == 1:
                    seen[u] |= 1 << c

        def unassign(v: int, c: int) -> None:
            nonlocal uncoloured
            colour[v] = -1
            uncoloured |= 1 << v
            for u in iter_bits(adj[v]):
                count[u][c] -= 1
                if count[u][c] == 0:
                    seen[u] &= ~(1 << c)

        for c, v in enumerate(clique):
            assign(v, c)

        nodes = 0

        def search(used: int) -> bool:
            nonlocal best, best_col, nodes
            nodes += 1
            if nodes > node_limit:
                raise _Budget
            if not uncoloured:
                best = used
                best_col = list(colour)
                return best == lower
            v = -1
            key = None
            for u in iter_bits(uncoloured):
                k = (seen[u].bit_count(), (adj[u] & uncoloured).bit_count())
                if key is None or k > key:
                    key, v = k, u
            for c in range(used):
                if not seen[v] >> c & 1:
                    assign(v, c)
                    done = search(used)
                    unassign(v, c)
                    if done:
                        return True
            if used + 1 < best:
                assign(v, used)
                done = search(used + 1)
                unassign(v, used)
                if done:
                    return True
            return False

        try:
            search(len(clique))
        except _Budget:
            best_col = _chi_by_cover(g, lower)
            best = max(best_col) + 1
    _check_colouring(g, best_col)
    return Colouring(best, tuple(best_col))


@dataclass(frozen=True)
class CliqueCover:
    value: int
    cliques: tuple[tuple[int, ...], ...]


def sigma(g: Graph) -> CliqueCover:
    """Clique cover number, as the chromatic number of the complement."""
    col = chi(complement(g))
    cover = tuple(c for c in col.classes() if c)
    for cl in cover:
        if not g.is_clique(cl):
            raise AssertionError("cover class is not a clique")
    if sorted(v for cl in cover for v in cl) != list(range(g.n)):
        raise AssertionError("cover does not partition the vertex set")
    return CliqueCover(col.value, cover)


def asymptotic_bounds(g: Graph, n_max: int, max_vertices: int = 40, tol_gap: float = 1e-7) -> dict:
    """Finite-power table of alpha, sigma (strong) and sigma (disjunctive) roots.

    Only finite-n values are reported; no limit is inferred.
    """
    from .lp import alpha_star
    from .sdp import lovasz_theta

    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if g.n ** n_max > max_vertices:
        raise GuardError(f"power {n_max} of a {g.n}-vertex graph exceeds {max_vertices} vertices")
    rows = []
    for k in range(1, n_max + 1):
        strong = power(g, k, strong_product)
        disj = power(g, k, disjunctive_product)
        a = alpha(strong).value
        s = sigma(strong).value
        sd = sigma(disj).value
        rows.append({
            "n": k,
            "alpha": a,
            "alpha_root": float(a) ** (1 / k),
            "sigma_strong": s,
            "sigma_strong_root": s ** (1 / k),
            "sigma_disjunctive": sd,
            "sigma_disjunctive_root": sd ** (1 / k),
        })
    return {"theta": lovasz_theta(g, tol_gap=tol_gap).value, "alpha_star": alpha_star(g), "rows": rows}
