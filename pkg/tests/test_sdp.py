import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from gal.errors import SolverError
from gal.graphs import (Graph, Weights, complement, complete, cycle, disjunctive_product, empty, petersen,
                        random_graph, strong_product)
from gal.params import alpha, sigma
from gal.lp import alpha_star
from gal.sdp import LOVASZ, MINUS, PLUS, VARIANTS, ThetaProgram, primal_violation, solve_theta, theta

from strategies import graphs


def odd_cycle_theta(n):
    return n * math.cos(math.pi / n) / (1 + math.cos(math.pi / n))


@pytest.mark.parametrize("variant", VARIANTS)
def test_c5_all_variants(variant):
    c = theta(cycle(5), variant)
    assert c.value == pytest.approx(math.sqrt(5), abs=1e-7)
    assert c.accepted and c.gap <= 1e-7


def test_closed_forms():
    assert theta(cycle(7)).value == pytest.approx(odd_cycle_theta(7), abs=1e-7)
    assert theta(cycle(9)).value == pytest.approx(odd_cycle_theta(9), abs=1e-7)
    assert theta(petersen()).value == pytest.approx(4, abs=1e-7)
    assert theta(complete(4)).value == pytest.approx(1, abs=1e-7)
    assert theta(empty(4)).value == pytest.approx(4, abs=1e-7)


def test_certificate_is_consistent():
    c = theta(cycle(7), MINUS)
    g = cycle(7)
    assert np.trace(c.B) == pytest.approx(1)
    assert np.linalg.eigvalsh(c.B)[0] >= -1e-8
    assert np.sum(c.B) == pytest.approx(c.value, abs=1e-12)
    assert np.linalg.eigvalsh(c.Z - np.ones((7, 7)))[0] >= -1e-8
    assert np.allclose(np.diag(c.Z), c.lam)
    for u, v in g.edges():
        assert c.B[u, v] == 0
    for u, v in g.non_edges():
        assert c.B[u, v] >= 0 and c.Z[u, v] <= 0
    assert c.value <= c.lam


def test_program_validation():
    with pytest.raises(ValueError):
        ThetaProgram(cycle(5), "nope")
    with pytest.raises(ValueError):
        ThetaProgram(cycle(5), LOVASZ, Weights.ones(4))
    with pytest.raises(ValueError):
        solve_theta(ThetaProgram(Graph(0, ())))
    with pytest.raises(ValueError):
        solve_theta(ThetaProgram(cycle(5)), tol_gap=0)


def test_budget_exhaustion_is_reported():
    with pytest.raises(SolverError) as info:
        theta(petersen(), max_iter=2)
    assert info.value.certificate.gap > 0


def test_unit_weights_match_unweighted():
    for v in VARIANTS:
        a = theta(cycle(7), v).value
        b = theta(cycle(7), v, Weights.ones(7)).value
        assert a == b


def test_weighted_values():
    # K_n with weights: the heaviest vertex; empty graph: the total
    w = Weights([Fraction(1), Fraction(4), Fraction(2)])
    assert theta(complete(3), LOVASZ, w).value == pytest.approx(4, abs=1e-6)
    assert theta(empty(3), LOVASZ, w).value == pytest.approx(7, abs=1e-6)


def test_zero_weight_vertices_are_harmless():
    w = Weights([Fraction(1)] * 4 + [Fraction(0)])
    c = theta(cycle(5), LOVASZ, w)
    # dropping a vertex of C5 leaves P4, with theta 2
    assert c.value == pytest.approx(2, abs=1e-6)


def test_deterministic():
    g = random_graph(8, 0.5, 2)
    a, b = theta(g, PLUS), theta(g, PLUS)
    assert a.value == b.value and np.array_equal(a.B, b.B)


@settings(max_examples=25)
@given(graphs(min_n=2, max_n=8))
def test_sandwich(g):
    a = alpha(g).value
    tm, t, tp = (theta(g, v).value for v in (MINUS, LOVASZ, PLUS))
    assert a - 1e-6 <= tm <= t + 2e-7 <= tp + 4e-7
    assert tp <= float(alpha_star(g)) + 1e-6 <= sigma(g).value + 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_multiplicativity_and_one_sided_bounds(seed):
    g, h = random_graph(5, 0.5, seed), random_graph(5, 0.5, 20 + seed)
    tg, th = theta(g).value, theta(h).value
    assert theta(strong_product(g, h)).value == pytest.approx(tg * th, rel=1e-6)
    assert theta(disjunctive_product(g, h)).value == pytest.approx(tg * th, rel=1e-6)
    assert theta(strong_product(g, h), MINUS).value >= theta(g, MINUS).value * theta(h, MINUS).value - 1e-6
    assert theta(disjunctive_product(g, h), PLUS).value <= theta(g, PLUS).value * theta(h, PLUS).value + 1e-6


def test_primal_violation_detects_pattern_breaks():
    prog = ThetaProgram(cycle(5), LOVASZ)
    B = np.eye(5) / 5
    assert primal_violation(prog, B) < 1e-15
    B[0, 1] = B[1, 0] = 0.01
    assert primal_violation(prog, B) == pytest.approx(0.01)


def test_complement_product_identity():
    # theta(G) theta(Gbar) = n for vertex-transitive G
    for g in (cycle(7), petersen()):
        assert theta(g).value * theta(complement(g)).value == pytest.approx(g.n, abs=1e-6)
