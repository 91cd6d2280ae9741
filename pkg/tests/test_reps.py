import json
import math

import numpy as np
import pytest

from gal.errors import SolverError
from gal.graphs import Weights, complement, cycle, empty, random_graph
from gal.reps import (NONNEG_OR, OBTUSE, OR_OF_COMPLEMENT, OrthoRep, extract_rep, rebuild_primal, umbrella_value,
                      validate_rep)
from gal.sdp import LOVASZ, MINUS, PLUS, VARIANTS, ThetaProgram, primal_violation, theta


def lovasz_umbrella():
    """Closed-form umbrella of C5: unit vectors, orthogonal on non-adjacent pairs."""
    n = 5
    c = math.cos(math.pi / n)
    z = math.sqrt(c / (1 + c))
    r = math.sqrt(1 - z * z)
    # vertices two steps apart differ by 4 pi / 5, where r^2 cos + z^2 vanishes
    vecs = np.array([[r * math.cos(2 * math.pi * k / n), r * math.sin(2 * math.pi * k / n), z]
                     for k in range(n)])
    handle = np.array([0.0, 0.0, 1.0])
    w = (vecs @ handle) ** 2
    return OrthoRep(OR_OF_COMPLEMENT, vecs, handle, w, np.ones(n))


def test_umbrella_validates_exactly():
    rep = lovasz_umbrella()
    # orthogonal on non-edges of C5, i.e. on the edges of its complement
    report = validate_rep(rep, complement(cycle(5)))
    assert all(v < 1e-12 for v in report.violations(rep.kind).values())
    assert 1 / rep.weights[0] == pytest.approx(math.sqrt(5))
    assert umbrella_value(rep, np.ones(5)) == pytest.approx(math.sqrt(5))


def test_scaled_vector_reported():
    rep = lovasz_umbrella()
    vecs = rep.vectors.copy()
    vecs[2] *= 2
    bad = OrthoRep(rep.kind, vecs, rep.handle, rep.weights, rep.program_weights)
    report = validate_rep(bad, complement(cycle(5)))
    assert report.norm == pytest.approx(1.0)
    assert not report.ok(bad.kind)


def test_c5_weights_uniform():
    rep = extract_rep(theta(cycle(5)))
    assert rep.kind == OR_OF_COMPLEMENT
    assert rep.weights == pytest.approx([1 / math.sqrt(5)] * 5, abs=1e-4)
    assert rep.value() == pytest.approx(math.sqrt(5), abs=1e-6)


def test_empty_graph_rep():
    rep = extract_rep(theta(empty(4)))
    assert np.allclose(rep.gram(), 1)
    assert np.allclose(np.abs(rep.vectors @ rep.handle), 1)
    assert rep.weights == pytest.approx([1] * 4)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("seed", range(5))
def test_extraction_pipeline(variant, seed):
    g = random_graph(8, 0.5, seed)
    cert = theta(g, variant)
    rep = extract_rep(cert, variant)
    report = validate_rep(rep, g)
    assert report.ok(rep.kind, tol_sign=1e-6)
    # Jensen step from below, the optimum from above
    assert rep.value() >= cert.value - 1e-6
    assert rep.value() <= cert.lam + 1e-6
    rb = rebuild_primal(rep)
    assert primal_violation(ThetaProgram(g, variant), rb.B) < 1e-7
    assert rb.value >= rb.theta - 1e-9
    assert rb.value == pytest.approx(cert.value, abs=1e-5)


def test_nonneg_handle_consistent():
    for seed in range(5):
        rep = extract_rep(theta(random_graph(7, 0.5, seed), MINUS))
        assert rep.kind == NONNEG_OR
        assert rep.overlaps().min() >= -1e-8


def test_weighted_extraction():
    g = random_graph(6, 0.5, 4)
    w = Weights.real([0.5, 2.0, 1.0, 0.0, 3.0, 1.5])
    cert = theta(g, PLUS, w)
    rep = extract_rep(cert)
    assert rep.kind == OBTUSE
    assert rep.value() == pytest.approx(cert.value, abs=1e-6)
    assert rep.weights[3] == 0 or rep.program_weights[3] == 0
    rb = rebuild_primal(rep)
    assert rb.value == pytest.approx(cert.value, abs=1e-5)


def test_zero_rows_get_private_vectors():
    # weight 0 on vertex 4 leaves its row of B empty
    w = Weights.real([1, 1, 1, 1, 0])
    rep = extract_rep(theta(cycle(5), LOVASZ, w))
    g = rep.gram()
    assert g[4, 4] == pytest.approx(1)
    assert np.allclose(g[4, :4], 0)
    assert rep.weights[4] == 0


def test_rejected_certificate():
    cert = theta(cycle(5))
    cert.gap = 1.0
    with pytest.raises(SolverError):
        extract_rep(cert)
    with pytest.raises(ValueError):
        extract_rep(theta(cycle(5)), PLUS)


def test_json_round_trip():
    rep = extract_rep(theta(cycle(7), PLUS))
    data = json.loads(json.dumps(rep.to_json()))
    back = OrthoRep.from_json(data)
    assert back.kind == rep.kind
    assert np.array_equal(back.vectors, rep.vectors)
    assert data["tolerances"]["norm"] == 1e-8
