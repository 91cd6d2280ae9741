import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gal.errors import GuardError
from gal.graphs import (Weights, blowup, complement, complete, cycle, disjunctive_product, empty, petersen,
                        random_bipartite, random_graph, strong_product)
from gal.params import alpha, asymptotic_bounds, chi, clique_number, maximal_cliques, sigma

from strategies import graphs


def brute_alpha(g, w=None):
    best = 0
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if g.is_independent(vs):
            best = max(best, sum(w[v] for v in vs) if w else len(vs))
    return best


def brute_chi(g):
    import itertools

    for k in range(1, g.n + 1):
        for colours in itertools.product(range(k), repeat=g.n):
            if all(colours[u] != colours[v] for u, v in g.edges()):
                return k
    return 0


def test_maximal_cliques_examples():
    assert len(maximal_cliques(cycle(5))) == 5
    assert all(bin(c).count("1") == 2 for c in maximal_cliques(cycle(5)))
    assert maximal_cliques(complete(4)) == (0b1111,)
    cl = maximal_cliques(strong_product(cycle(5), cycle(5)))
    assert max(bin(c).count("1") for c in cl) == 4


@given(graphs(max_n=7))
def test_maximal_cliques_are_maximal_and_cover(g):
    cl = maximal_cliques(g)
    covered = 0
    for c in cl:
        vs = [v for v in range(g.n) if c >> v & 1]
        assert g.is_clique(vs)
        assert not any(g.is_clique(vs + [u]) for u in range(g.n) if not c >> u & 1)
        covered |= c
    assert covered == (1 << g.n) - 1
    assert len(set(cl)) == len(cl)


def test_alpha_c5_and_square():
    assert alpha(cycle(5)).value == 2
    r = alpha(strong_product(cycle(5), cycle(5)))
    assert r.value == 5 and len(r.witness) == 5


def test_alpha_uniform_product_weights():
    c = 1 / math.sqrt(5)
    w = Weights.real([c * c * 5] * 25)  # p(v) p(w) with p = 1/sqrt(5) on each factor, scaled by 5
    # uniform weights: maximum weight is alpha times the weight
    assert alpha(strong_product(cycle(5), cycle(5)), w).value == pytest.approx(5 * c * c * 5, abs=1e-9)
    w2 = Weights.real([c] * 25)
    assert alpha(strong_product(cycle(5), cycle(5)), w2).value == pytest.approx(math.sqrt(5), abs=1e-9)


@given(graphs(max_n=8))
def test_alpha_matches_brute_force(g):
    r = alpha(g)
    assert r.value == brute_alpha(g)
    assert g.is_independent(r.witness)


@given(graphs(max_n=7), st.lists(st.fractions(0, 5, max_denominator=6), min_size=7, max_size=7))
def test_weighted_alpha_exact(g, ws):
    w = Weights(ws[: g.n])
    r = alpha(g, w)
    assert r.value == brute_alpha(g, w.values)
    assert sum(w[v] for v in r.witness) == r.value


@given(graphs(max_n=7), st.lists(st.fractions(0, 3, max_denominator=4), min_size=7, max_size=7),
       st.fractions(0, 2, max_denominator=3))
def test_weight_monotonicity_and_shift(g, ws, q):
    p = Weights(ws[: g.n])
    r = Weights([x + y for x, y in zip(p.values, ws[1: g.n + 1] + [Fraction(0)])])
    assert alpha(g, p).value <= alpha(g, r).value
    assert alpha(g, p.shifted(q)).value <= alpha(g, p).value + q * g.n


@given(graphs(max_n=6), st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_blowup_transfer(g, mult):
    m = mult[: g.n]
    w = Weights([Fraction(k) for k in m])
    assert alpha(blowup(g, m)).value == alpha(g, w).value


@given(graphs(max_n=5), graphs(max_n=5))
def test_alpha_multiplicative_on_disjunctive(g, h):
    assert alpha(disjunctive_product(g, h)).value == alpha(g).value * alpha(h).value


def test_real_weight_value_is_witness_sum():
    w = Weights.real([0.1, 0.2, 0.3, 0.4, 0.5])
    r = alpha(cycle(5), w)
    assert r.value == pytest.approx(0.8)
    assert r.witness == (2, 4)


def test_zero_weights():
    r = alpha(cycle(5), Weights([Fraction(0)] * 5))
    assert r.value == 0 and r.witness == ()


def test_sigma_and_chi_examples():
    assert sigma(cycle(5)).value == 3
    assert chi(cycle(5)).value == 3
    assert sigma(complete(5)).value == 1
    assert sigma(empty(5)).value == 5
    assert chi(petersen()).value == 3
    assert chi(random_bipartite(5, 6, 0.6, 2)).value <= 2


def test_sigma_of_c5_square():
    r = sigma(strong_product(cycle(5), cycle(5)))
    assert r.value == 8
    assert sorted(v for c in r.cliques for v in c) == list(range(25))


@given(graphs(max_n=6))
def test_chi_matches_brute_force(g):
    c = chi(g)
    assert c.value == brute_chi(g)
    assert all(c.colours[u] != c.colours[v] for u, v in g.edges())


@pytest.mark.parametrize("seed", range(6))
def test_chi_complement_is_sigma(seed):
    g = random_graph(10, 0.5, seed)
    assert chi(complement(g)).value == sigma(g).value


@pytest.mark.parametrize("seed", range(8))
def test_cover_program_agrees_with_search(seed):
    g = random_graph(9 + seed % 4, 0.5, 100 + seed)
    assert chi(g, node_limit=0).value == chi(g).value


def test_clique_number():
    assert clique_number(petersen()).value == 2
    assert clique_number(complete(4)).value == 4


def test_asymptotic_bounds_c5():
    t = asymptotic_bounds(cycle(5), 2)
    r1, r2 = t["rows"]
    assert (r1["alpha"], r2["alpha"]) == (2, 5)
    assert r2["alpha_root"] == pytest.approx(math.sqrt(5))
    assert (r1["sigma_strong"], r2["sigma_strong"]) == (3, 8)
    assert t["alpha_star"] == Fraction(5, 2)
    for row in t["rows"]:
        assert row["alpha_root"] <= t["theta"] + 1e-7 <= t["alpha_star"] + 2e-7
        assert t["alpha_star"] <= row["sigma_strong_root"] + 1e-12


def test_asymptotic_bounds_guard():
    with pytest.raises(GuardError):
        asymptotic_bounds(cycle(7), 2)
    assert [r["alpha_root"] for r in asymptotic_bounds(complete(3), 3)["rows"]] == [1, 1, 1]


def test_alpha_speed_on_c5_square():
    t = time.perf_counter()
    alpha(strong_product(cycle(5), cycle(5)))
    assert time.perf_counter() - t < 1.0
