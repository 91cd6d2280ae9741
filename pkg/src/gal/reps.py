"""Orthonormal and obtuse representations read off optimal theta matrices.

An accepted primal matrix ``B`` is a Gram matrix ``B[v, w] = <psi_v|psi_w>``.
Normalising gives unit vectors ``phi_v``; the handle is the normalised sum
``Psi = sum_v sqrt(pi_v) psi_v`` and the vertex weights are
``p(v) = <h|phi_v>^2``.  The pattern on ``B`` carries over to the vectors:

* ``or_of_complement`` (from ``lovasz``): phi_v _|_ phi_w on every edge
* ``nonneg_or`` (from ``schrijver_minus``): additionally all overlaps >= 0
* ``obtuse`` (from ``szegedy_plus``): overlaps <= 0 on every edge
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .graphs import Graph
from .sdp import LOVASZ, MINUS, PLUS, CertifiedValue

OR_OF_COMPLEMENT = "or_of_complement"
NONNEG_OR = "nonneg_or"
OBTUSE = "obtuse"

KIND_OF = {LOVASZ: OR_OF_COMPLEMENT, MINUS: NONNEG_OR, PLUS: OBTUSE}
VARIANT_OF = {k: v for v, k in KIND_OF.items()}

EIG_CLAMP = 1e-10
ZERO_ROW = 1e-10
TOL_NORM = 1e-8
TOL_SIGN = 1e-7
TOL_VALUE = 1e-5


@dataclass(frozen=True)
class OrthoRep:
    kind: str
    vectors: np.ndarray  # one unit row per vertex
    handle: np.ndarray
    weights: np.ndarray  # |<h|phi_v>|^2
    program_weights: np.ndarray  # the pi of the program the rep came from

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def overlaps(self) -> np.ndarray:
        return self.vectors @ self.handle

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def value(self) -> float:
        """``sum_v pi_v |<h|phi_v>|^2``, the objective of the Gram formulation."""
        return float(self.program_weights @ self.weights)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vectors": self.vectors.tolist(),
            "handle": self.handle.tolist(),
            "weights": self.weights.tolist(),
            "program_weights": self.program_weights.tolist(),
            "tolerances": {"norm": TOL_NORM, "sign": TOL_SIGN, "eig_clamp": EIG_CLAMP, "zero_row": ZERO_ROW},
        }

    @classmethod
    def from_json(cls, data: dict) -> "OrthoRep":
        if data["kind"] not in VARIANT_OF:
            raise ValueError(f"unknown representation kind {data['kind']!r}")
        return cls(
            data["kind"],
            np.array(data["vectors"], dtype=float),
            np.array(data["handle"], dtype=float),
            np.array(data["weights"], dtype=float),
            np.array(data["program_weights"], dtype=float),
        )


def _unit_rows(gram: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(gram)
    keep = vals > EIG_CLAMP
    rows = vecs[:, keep] * np.sqrt(vals[keep])
    norms = np.linalg.norm(rows, axis=1)
    return rows / norms[:, None]


def extract_rep(cert: CertifiedValue, variant: str | None = None) -> OrthoRep:
    """Turn an accepted theta certificate into a representation with handle.

    The unit vectors come from factoring the normalised matrix
    ``D^-1/2 B D^-1/2`` (``D = diag B``), which has exactly the pattern of
    ``B`` and a unit diagonal.  Rows with ``B[v, v]`` below ``ZERO_ROW`` get
    private unit vectors in extra coordinates.
    """
    if variant is not None and variant != cert.variant:
        raise ValueError(f"certificate is for {cert.variant}, not {variant}")
    if not cert.accepted:
        raise SolverError("refusing to extract a representation from a rejected certificate")
    B = cert.B
    n = B.shape[0]
    pi = np.asarray(cert.weights, dtype=float)
    diag = np.diag(B).copy()
    live = np.flatnonzero(diag > ZERO_ROW)
    dead = np.flatnonzero(diag <= ZERO_ROW)

    if len(live):
        d = np.sqrt(diag[live])
        core = _unit_rows(B[np.ix_(live, live)] / np.outer(d, d))
    else:
        core = np.zeros((0, 0))
    dim = core.shape[1] + len(dead)
    vectors = np.zeros((n, max(dim, 1)))
    vectors[live, : core.shape[1]] = core
    for k, v in enumerate(dead):
        vectors[v, core.shape[1] + k] = 1.0
    if dim == 0:
        vectors[:, 0] = 1.0

    psi_sum = (np.sqrt(pi[live]) * np.sqrt(diag[live])) @ vectors[live] if len(live) else np.zeros(vectors.shape[1])
    norm = np.linalg.norm(psi_sum)
    if norm > 0:
        handle = psi_sum / norm
    else:
        handle = np.zeros(vectors.shape[1])
        handle[0] = 1.0
    weights = (vectors @ handle) ** 2
    weights[dead] = 0.0
    return OrthoRep(KIND_OF[cert.variant], vectors, handle, weights, pi)


@dataclass(frozen=True)
class RepReport:
    norm: float  # max | ||phi_v|| - 1 |
    handle_norm: float
    forbidden: float  # max |<phi_v|phi_w>| where it must vanish
    sign: float  # worst violation of a required sign
    handle_consistency: float  # min <h|phi_v>

    def violations(self, kind: str) -> dict:
        out = {"norm": self.norm, "handle_norm": self.handle_norm,
               "forbidden": self.forbidden, "sign": self.sign}
        if kind in (NONNEG_OR, OBTUSE):
            out["handle"] = max(0.0, -self.handle_consistency)
        return out

    def ok(self, kind: str, tol_norm: float = TOL_NORM, tol_sign: float = TOL_SIGN) -> bool:
        v = self.violations(kind)
        return (v["norm"] <= tol_norm and v["handle_norm"] <= tol_norm
                and v["forbidden"] <= tol_sign and v["sign"] <= tol_sign
                and v.get("handle", 0.0) <= tol_sign)


def validate_rep(rep: OrthoRep, g: Graph) -> RepReport:
    if rep.n != g.n:
        raise ValueError("representation and graph sizes differ")
    gram = rep.gram()
    norms = np.linalg.norm(rep.vectors, axis=1)
    adj = g.adjacency_matrix().astype(bool)
    off = ~np.eye(g.n, dtype=bool)
    forbidden = sign = 0.0
    if rep.kind in (OR_OF_COMPLEMENT, NONNEG_OR):
        forbidden = float(np.max(np.abs(gram[adj]), initial=0.0))
    if rep.kind == NONNEG_OR:
        sign = float(np.max(-gram[off], initial=0.0))
    elif rep.kind == OBTUSE:
        sign = float(np.max(gram[adj], initial=0.0))
    return RepReport(
        norm=float(np.max(np.abs(norms - 1.0), initial=0.0)),
        handle_norm=abs(float(np.linalg.norm(rep.handle)) - 1.0),
        forbidden=forbidden,
        sign=max(sign, 0.0),
        handle_consistency=float(np.min(rep.overlaps(), initial=0.0)),
    )


@dataclass(frozen=True)
class Rebuilt:
    B: np.ndarray
    value: float  # tr(B Pi)
    theta: float  # rep value the rebuild was scaled by


def rebuild_primal(rep: OrthoRep) -> Rebuilt:
    """Primal matrix from a representation: ``psi_v = sqrt(pi_v / theta) phi_v <phi_v|h>``.

    ``tr B = 1`` by construction and ``tr(B Pi) >= theta``; the sign pattern
    survives whenever the handle is consistent.
    """
    theta = rep.value()
    if theta <= 0:
        raise ValueError("representation has zero value")
    pi = rep.program_weights
    psi = rep.vectors * (np.sqrt(pi / theta) * rep.overlaps())[:, None]
    B = psi @ psi.T
    r = np.sqrt(pi)
    return Rebuilt(B, float(r @ B @ r), theta)


def umbrella_value(rep: OrthoRep, p) -> float:
    """``max_v p(v) / <h|phi_v>^2``, an upper bound for the complementary program.

    Vertices of zero weight are skipped; a positive weight on a vertex
    orthogonal to the handle gives ``inf``.
    """
    p = np.asarray(p, dtype=float)
    ov = rep.overlaps() ** 2
    worst = 0.0
    for pv, o in zip(p, ov):
        if pv > 0:
            worst = max(worst, pv / o if o > 0 else np.inf)
    return worst
