"""Exact linear programming over the rationals.

``solve_lp`` handles ``max c.x  s.t.  A x <= b, x >= 0`` with a two-phase
tableau simplex using Bland's rule, so it terminates on degenerate input.
All arithmetic is done with ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graphs import Graph, Weights
from .params import maximal_cliques


OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """``max objective.x  s.t.  matrix x <= rhs, x >= 0``."""

    objective: tuple[Fraction, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    @classmethod
    def build(cls, objective, matrix, rhs) -> "LpProblem":
        c = tuple(Fraction(x) for x in objective)
        a = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        b = tuple(Fraction(x) for x in rhs)
        if len(a) != len(b):
            raise ValueError(f"{len(a)} constraint rows but {len(b)} right-hand sides")
        for i, row in enumerate(a):
            if len(row) != len(c):
                raise ValueError(f"row {i} has {len(row)} entries, expected {len(c)}")
        return cls(c, a, b)


@dataclass(frozen=True)
class LpSolution:
    status: str
    primal: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, j: int, zrows) -> None:
        prow = self.rows[r]
        p = prow[j]
        if p != 1:
            inv = 1 / p
            prow = [x * inv if x else x for x in prow]
            self.rows[r] = prow
        nz = [k for k, x in enumerate(prow) if x]
        for target in (*self.rows, *zrows):
            if target is prow:
                continue
            f = target[j]
            if f:
                for k in nz:
                    target[k] -= f * prow[k]
        self.basis[r] = j
        self.pivots += 1

    def run(self, z, allowed: int) -> str:
        """Bland's-rule simplex on reduced-cost row ``z`` (enter when < 0)."""
        while True:
            enter = next((j for j in range(allowed) if z[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter, [z])


def _reduced_costs(rows, basis, cost, width):
    z = [-c for c in cost] + [Fraction(0)] * (width - len(cost))
    for row, bvar in zip(rows, basis):
        cb = cost[bvar] if bvar < len(cost) else 0
        if cb:
            for k, x in enumerate(row):
                if x:
                    z[k] += cb * x
    return z


def solve_lp(problem: LpProblem) -> LpSolution:
    c, a, b = problem.objective, problem.matrix, problem.rhs
    m, n = len(a), len(c)
    needs_art = [i for i in range(m) if b[i] < 0]
    n_art = len(needs_art)
    width = n + m + n_art + 1
    rows = []
    basis = []
    art_of = {}
    for i in range(m):
        row = [Fraction(0)] * width
        sign = -1 if b[i] < 0 else 1
        for j, x in enumerate(a[i]):
            if x:
                row[j] = sign * x
        row[n + i] = Fraction(sign)
        row[-1] = sign * b[i]
        if sign < 0:
            k = n + m + len(art_of)
            art_of[i] = k
            row[k] = Fraction(1)
            basis.append(k)
        else:
            basis.append(n + i)
        rows.append(row)
    tab = _Tableau(rows, basis)

    if n_art:
        phase1_cost = [Fraction(0)] * (n + m) + [Fraction(-1)] * n_art
        z1 = _reduced_costs(tab.rows, tab.basis, phase1_cost, width)
        tab.run(z1, n + m + n_art)
        if z1[-1] < 0:
            return LpSolution(INFEASIBLE, pivots=tab.pivots)
        for r in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[r] >= n + m:
                j = next((k for k in range(n + m) if tab.rows[r][k]), None)
                if j is None:
                    del tab.rows[r]
                    del tab.basis[r]
                else:
                    tab.pivot(r, j, [])

    cost = list(c) + [Fraction(0)] * m
    z = _reduced_costs(tab.rows, tab.basis, cost, width)
    status = tab.run(z, n + m)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, pivots=tab.pivots)

    x = [Fraction(0)] * (n + m)
    for row, bvar in zip(tab.rows, tab.basis):
        x[bvar] = row[-1]
    primal = tuple(x[:n])
    dual = tuple(z[n + i] for i in range(m))
    value = sum((ci * xi for ci, xi in zip(c, primal)), Fraction(0))
    _check_optimality(problem, primal, dual, value)
    return LpSolution(OPTIMAL, primal, dual, value, tab.pivots)


def _check_optimality(problem: LpProblem, x, y, value) -> None:
    c, a, b = problem.objective, problem.matrix, problem.rhs
    if any(v < 0 for v in x) or any(v < 0 for v in y):
        raise ArithmeticError("simplex produced a negative variable")
    for i, row in enumerate(a):
        if sum(aij * xj for aij, xj in zip(row, x)) > b[i]:
            raise ArithmeticError(f"primal row {i} violated")
    for j in range(len(c)):
        if sum(a[i][j] * y[i] for i in range(len(a))) < c[j]:
            raise ArithmeticError(f"dual column {j} violated")
    if sum(bi * yi for bi, yi in zip(b, y)) != value:
        raise ArithmeticError("primal and dual objectives differ")


@dataclass(frozen=True)
class FractionalPacking:
    value: Fraction
    packing: tuple[Fraction, ...]
    cliques: tuple[int, ...]
    cover: tuple[Fraction, ...]


def fractional_packing(g: Graph, p: Weights | None = None, cliques: Sequence[int] | None = None) -> FractionalPacking:
    """Weighted fractional packing number and an optimal fractional clique cover.

    Primal: ``max sum p(v) t_v`` with ``sum_{v in C} t_v <= 1`` per clique.
    Dual: ``min sum s_C`` with ``sum_{C ni v} s_C >= p(v)``.  Only maximal
    cliques are used unless ``cliques`` is given.
    """
    if p is None:
        p = Weights.ones(g.n)
    if not p.exact:
        raise TypeError("fractional packing needs exact rational weights")
    if len(p) != g.n:
        raise ValueError("one weight per vertex required")
    if g.n == 0:
        return FractionalPacking(Fraction(0), (), (), ())
    if cliques is None:
        cliques = maximal_cliques(g)
    cliques = tuple(cliques)
    for cl in cliques:
        if not g.is_clique([v for v in range(g.n) if cl >> v & 1]):
            raise ValueError("constraint set is not a clique")
    one, zero = Fraction(1), Fraction(0)
    matrix = [tuple(one if cl >> v & 1 else zero for v in range(g.n)) for cl in cliques]
    sol = solve_lp(LpProblem.build(p.values, matrix, [one] * len(cliques)))
    if sol.status != OPTIMAL:
        raise ArithmeticError(f"packing LP ended with status {sol.status}")
    return FractionalPacking(sol.objective, sol.primal, cliques, sol.dual)


def alpha_star(g: Graph, p: Weights | None = None) -> Fraction:
    return fractional_packing(g, p).value
