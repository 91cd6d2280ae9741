"""Certified Lovasz, Schrijver and Szegedy numbers of weighted graphs.

The three programs share one primal form,

    max tr(B Pi)  s.t.  B psd, tr B = 1, plus a sign/zero pattern on B,

with ``Pi[v, w] = sqrt(p(v) p(w))``:

* ``lovasz``:          B[v, w] = 0 on edges
* ``schrijver_minus``: B[v, w] = 0 on edges, B[v, w] >= 0 elsewhere
* ``szegedy_plus``:    B[v, w] <= 0 on edges

and the dual ``min lam  s.t.  Z - Pi psd, Z[v, v] = lam`` where ``Z`` may be
nonzero on edges only (``lovasz``), is free on edges and <= 0 on non-edges
(``schrijver_minus``), or is >= 0 on edges and zero on non-edges
(``szegedy_plus``).

Both problems are solved together by a primal-dual interior-point method
(HKM direction, Mehrotra predictor-corrector).  The iterate is then rounded
onto the feasible sets: pattern entries are clipped, and a multiple of the
identity is added where needed for semidefiniteness.  The rounded pair
brackets the optimum, and the bracket width is the reported gap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import SolverError
from .graphs import Graph, Weights

log = logging.getLogger(__name__)

LOVASZ = "lovasz"
MINUS = "schrijver_minus"
PLUS = "szegedy_plus"
VARIANTS = (LOVASZ, MINUS, PLUS)

TOL_GAP = 1e-7
TOL_FEAS = 1e-8
MAX_ITER = 500

# Pair constraint kinds: 2 B[a, b] (+ sign * slack) = 0.
_EQ, _GE, _LE = 0, 1, 2


@dataclass(frozen=True)
class ThetaProgram:
    graph: Graph
    variant: str = LOVASZ
    weights: Weights | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.weights is not None and len(self.weights) != self.graph.n:
            raise ValueError("one weight per vertex required")

    def weight_vector(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.graph.n)
        return np.array(self.weights.as_floats(), dtype=float)

    def objective(self) -> np.ndarray:
        r = np.sqrt(self.weight_vector())
        return np.outer(r, r)

    def pair_constraints(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        g = self.graph
        edges = g.edges()
        if self.variant == LOVASZ:
            pairs, kinds = edges, [_EQ] * len(edges)
        elif self.variant == MINUS:
            non = g.non_edges()
            pairs = edges + non
            kinds = [_EQ] * len(edges) + [_GE] * len(non)
        else:
            pairs, kinds = edges, [_LE] * len(edges)
        arr = np.array(pairs, dtype=np.intp).reshape(-1, 2)
        return arr[:, 0], arr[:, 1], np.array(kinds, dtype=np.int8)


@dataclass
class CertifiedValue:
    """Primal matrix ``B`` and dual pair ``(lam, Z)`` bracketing the optimum."""

    variant: str
    value: float
    B: np.ndarray
    lam: float
    Z: np.ndarray
    primal_residual: float
    dual_residual: float
    gap: float
    iterations: int
    tol_gap: float
    tol_feas: float
    weights: np.ndarray = field(repr=False, default=None)

    @property
    def accepted(self) -> bool:
        return (
            self.gap <= self.tol_gap * (1 + abs(self.value))
            and self.primal_residual <= self.tol_feas
            and self.dual_residual <= self.tol_feas
        )

    def summary(self) -> dict:
        return {
            "variant": self.variant,
            "value": self.value,
            "dual_value": self.lam,
            "gap": self.gap,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "iterations": self.iterations,
        }


def _sym(a):
    return 0.5 * (a + a.T)


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest t with x + t dx psd (inf if unbounded)."""
    try:
        chol = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return 0.0
    li = np.linalg.inv(chol)
    lam_min = np.linalg.eigvalsh(_sym(li @ dx @ li.T))[0]
    return np.inf if lam_min >= 0 else -1.0 / lam_min


def _max_step_vec(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    if not neg.any():
        return np.inf
    return float(np.min(-x[neg] / dx[neg]))


class _Ipm:
    """Primal-dual path following for

        min <C, X>  s.t.  tr X = 1,  2 X[a_j, b_j] + sign_j x_j = 0,  X psd, x >= 0
        max y0      s.t.  S = C - y0 I - sum_j y_j (E_ab + E_ba) psd,  s = -sign * y >= 0
    """

    def __init__(self, n, c, ia, ib, kinds):
        self.n = n
        self.C = c
        self.ia, self.ib = ia, ib
        self.m = len(ia)
        self.slack_idx = np.flatnonzero(kinds != _EQ)
        sign = np.zeros(self.m)
        sign[kinds == _GE] = -1.0
        sign[kinds == _LE] = 1.0
        self.sign = sign[self.slack_idx]

    def op(self, X, x):
        """A(X) + a x, with the trace row first."""
        out = np.empty(self.m + 1)
        out[0] = np.trace(X)
        out[1:] = 2.0 * X[self.ia, self.ib]
        out[1 + self.slack_idx] += self.sign * x
        return out

    def adj(self, y):
        M = np.zeros((self.n, self.n))
        M[self.ia, self.ib] = y[1:]
        M = M + M.T
        M[np.diag_indices(self.n)] += y[0]
        return M

    def adj_lin(self, y):
        return self.sign * y[1 + self.slack_idx]

    def schur(self, X, Si, ratio):
        """HKM Schur complement ``H[i, j] = tr(A_i X A_j S^-1)`` plus slack terms."""
        a, b = self.ia, self.ib
        m = self.m
        H = np.empty((m + 1, m + 1))
        H[0, 0] = np.sum(X * Si)
        W = Si @ X
        H[0, 1:] = W[b, a] + W[a, b]
        H[1:, 0] = H[0, 1:]
        if m:
            Xaa, Xab, Xbb = X[np.ix_(a, a)], X[np.ix_(a, b)], X[np.ix_(b, b)]
            Saa, Sab, Sbb = Si[np.ix_(a, a)], Si[np.ix_(a, b)], Si[np.ix_(b, b)]
            H[1:, 1:] = Xab.T * Sab + Xbb * Saa + Xaa * Sbb + Xab * Sab.T
            k = 1 + self.slack_idx
            H[k, k] += ratio
        return H


def _solve_psd(H, rhs):
    try:
        factor = cho_factor(H, lower=True, check_finite=False)
        return cho_solve(factor, rhs, check_finite=False)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(H, rhs, rcond=None)[0]


def _ipm(prog: ThetaProgram, max_iter: int, target: float):
    """Yield ``(X, y, iteration, relative gap)`` for each interior iterate."""
    n = prog.graph.n
    Pi = prog.objective()
    C = -Pi
    ia, ib, kinds = prog.pair_constraints()
    ipm = _Ipm(n, C, ia, ib, kinds)
    m = ipm.m
    k = len(ipm.slack_idx)
    rhs_b = np.zeros(m + 1)
    rhs_b[0] = 1.0
    eye = np.eye(n)

    X = eye / n
    x = np.full(k, 1.0 / n)
    y = np.zeros(m + 1)
    y[0] = -(np.trace(Pi) + 1.0)
    S = C - ipm.adj(y)
    s = np.ones(k)
    c_norm = 1.0 + np.linalg.norm(C)

    it = 0
    for it in range(1, max_iter + 1):
        rp = rhs_b - ipm.op(X, x)
        Rd = C - S - ipm.adj(y)
        rdl = -s - ipm.adj_lin(y)
        dim = n + k
        mu = (np.sum(X * S) + x @ s) / dim
        pobj = np.sum(C * X)
        dobj = y[0]
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        pinf = np.linalg.norm(rp) / 2.0
        dinf = (np.linalg.norm(Rd) + np.linalg.norm(rdl)) / c_norm
        log.debug("it %3d  pobj %.12g  dobj %.12g  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e",
                  it, -pobj, -dobj, relgap, pinf, dinf, mu)
        yield X, y, it, relgap
        if relgap < target and pinf < 1e-12 and dinf < 1e-12:
            return

        try:
            Si = _sym(cho_solve(cho_factor(S, lower=True), eye))
        except np.linalg.LinAlgError:
            # S numerically singular: the iterate is as good as it gets
            return
        ratio = x / s
        H = ipm.schur(X, Si, ratio)

        def direction(sigma_mu, corr_X, corr_x):
            rc_X = sigma_mu * Si - X - corr_X
            rc_x = sigma_mu / s - x - corr_x
            rhs = rp - ipm.op(_sym(rc_X - X @ Rd @ Si), rc_x - x * rdl / s)
            dy = _solve_psd(H, rhs)
            dS = Rd - ipm.adj(dy)
            ds = rdl - ipm.adj_lin(dy)
            dX = _sym(rc_X - X @ dS @ Si)
            dx = rc_x - x * ds / s
            return dX, dx, dy, dS, ds

        zero = np.zeros_like(X)
        dXa, dxa, _, dSa, dsa = direction(0.0, zero, np.zeros(k))
        ap = min(1.0, _max_step(X, dXa), _max_step_vec(x, dxa))
        ad = min(1.0, _max_step(S, dSa), _max_step_vec(s, dsa))
        mu_aff = (np.sum((X + ap * dXa) * (S + ad * dSa)) + (x + ap * dxa) @ (s + ad * dsa)) / dim
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3

        dX, dx, dy, dS, ds = direction(sigma * mu, dXa @ dSa @ Si, dxa * dsa / s)
        tau = 0.98
        ap = min(1.0, tau * _max_step(X, dX), tau * _max_step_vec(x, dx))
        ad = min(1.0, tau * _max_step(S, dS), tau * _max_step_vec(s, ds))
        if ap < 1e-10 and ad < 1e-10:
            return
        X = _sym(X + ap * dX)
        x = x + ap * dx
        y = y + ad * dy
        S = _sym(S + ad * dS)
        s = s + ad * ds


def _min_eig(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(_sym(a))[0]) if a.size else 0.0


def _certify(prog: ThetaProgram, X, y, iterations, data, tol_gap, tol_feas) -> CertifiedValue:
    Pi, ia, ib, kinds = data
    n = prog.graph.n
    eq, ge, le = kinds == _EQ, kinds == _GE, kinds == _LE

    B = _sym(X).copy()
    vals = B[ia, ib]
    vals = np.where(eq, 0.0, vals)
    vals = np.where(ge, np.maximum(vals, 0.0), vals)
    vals = np.where(le, np.minimum(vals, 0.0), vals)
    B[ia, ib] = vals
    B[ib, ia] = vals
    shift = -_min_eig(B)
    if shift > 0:
        B[np.diag_indices(n)] += shift
    B /= np.trace(B)
    value = float(np.sum(B * Pi))

    lam = -float(y[0])
    zv = -y[1:]
    zv = np.where(ge, np.minimum(zv, 0.0), zv)
    zv = np.where(le, np.maximum(zv, 0.0), zv)
    Z = np.zeros((n, n))
    Z[ia, ib] = zv
    Z[ib, ia] = zv
    Z[np.diag_indices(n)] = lam
    lift = -_min_eig(Z - Pi)
    if lift > 0:
        lam += lift
        Z[np.diag_indices(n)] = lam

    primal_residual = primal_violation(prog, B)
    dual_residual = max(
        max(0.0, -_min_eig(Z - Pi)),
        float(np.max(np.abs(np.diag(Z) - lam))),
        _pattern_violation(prog, Z),
    )
    return CertifiedValue(
        variant=prog.variant,
        value=value,
        B=B,
        lam=lam,
        Z=Z,
        primal_residual=primal_residual,
        dual_residual=dual_residual,
        gap=lam - value,
        iterations=iterations,
        tol_gap=tol_gap,
        tol_feas=tol_feas,
        weights=prog.weight_vector(),
    )


def primal_violation(prog: ThetaProgram, B: np.ndarray) -> float:
    """Worst violation of trace, semidefiniteness and the sign pattern by ``B``."""
    ia, ib, kinds = prog.pair_constraints()
    vals = B[ia, ib]
    return max(
        abs(np.trace(B) - 1.0),
        max(0.0, -_min_eig(B)),
        float(np.max(np.abs(vals[kinds == _EQ]), initial=0.0)),
        float(np.max(-vals[kinds == _GE], initial=0.0)),
        float(np.max(vals[kinds == _LE], initial=0.0)),
    )


def _pattern_violation(prog: ThetaProgram, Z: np.ndarray) -> float:
    g = prog.graph
    adj = g.adjacency_matrix().astype(bool)
    off = ~np.eye(g.n, dtype=bool)
    non = off & ~adj
    worst = 0.0
    if prog.variant == LOVASZ:
        worst = float(np.max(np.abs(Z[non]), initial=0.0))
    elif prog.variant == MINUS:
        worst = float(np.max(Z[non], initial=0.0))
    else:
        worst = max(float(np.max(np.abs(Z[non]), initial=0.0)), float(np.max(-Z[adj], initial=0.0)))
    return worst


def _better(a: CertifiedValue, b: CertifiedValue) -> bool:
    if a.accepted != b.accepted:
        return a.accepted
    score = lambda c: max(c.gap, c.primal_residual, c.dual_residual)
    return score(a) < score(b)


def solve_theta(prog: ThetaProgram, tol_gap: float = TOL_GAP, tol_feas: float = TOL_FEAS,
                max_iter: int = MAX_ITER) -> CertifiedValue:
    """Solve a theta-family program and return matched primal/dual certificates.

    Raises ``SolverError`` when the certificates miss the tolerances; the
    rejected certificate is attached as ``err.certificate``.
    """
    if tol_gap <= 0:
        raise ValueError("tol_gap must be positive")
    if prog.graph.n == 0:
        raise ValueError("theta programs need at least one vertex")
    target = min(1e-10, tol_gap * 1e-3)
    data = (prog.objective(), *prog.pair_constraints())
    # Late iterates can drift once the gap is at rounding level, so every
    # nearly converged iterate is certified and the best one kept.
    cert = None
    last = None
    stalled = 0
    for X, y, it, relgap in _ipm(prog, max_iter, target):
        last = (X, y, it)
        if relgap > 1e-6:
            continue
        cand = _certify(prog, X, y, it, data, tol_gap, tol_feas)
        if cert is None or _better(cand, cert):
            cert, stalled = cand, 0
        else:
            stalled += 1
        if cert.accepted and (cert.gap <= target * (1.0 + abs(cert.value)) or stalled >= 5):
            break
    if cert is None:
        X, y, it = last
        cert = _certify(prog, X, y, it, data, tol_gap, tol_feas)
    if not cert.accepted:
        err = SolverError(
            f"{prog.variant} solve not certified after {cert.iterations} iterations: "
            f"gap {cert.gap:.3g}, residuals {cert.primal_residual:.3g}/{cert.dual_residual:.3g}"
        )
        err.certificate = cert
        raise err
    return cert


def theta(g: Graph, variant: str = LOVASZ, weights: Weights | None = None, **kw) -> CertifiedValue:
    return solve_theta(ThetaProgram(g, variant, weights), **kw)


def lovasz_theta(g: Graph, weights: Weights | None = None, **kw) -> CertifiedValue:
    return theta(g, LOVASZ, weights, **kw)


def theta_minus(g: Graph, weights: Weights | None = None, **kw) -> CertifiedValue:
    return theta(g, MINUS, weights, **kw)


def theta_plus(g: Graph, weights: Weights | None = None, **kw) -> CertifiedValue:
    return theta(g, PLUS, weights, **kw)
