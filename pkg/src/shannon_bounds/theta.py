"""Lovász theta through a small dense primal-dual interior-point method.

The SDP solved is

    max <J, X>  s.t.  tr X = 1,  X_ij = 0 for every edge ij,  X PSD,

with dual ``min t`` s.t. ``t I + Y - J`` PSD, ``Y`` supported on edges.
Results are certified intervals: the upper end is ``lambda_max(J - Y)``
for the final dual ``Y`` (any such ``Y`` is dual feasible for that ``t``),
the lower end is the objective of the final primal after repairing it into
exact feasibility.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = [
    "ThetaResult",
    "lovasz_theta",
    "theta_odd_cycle",
    "theta_modified_schlafli_check",
    "MAX_THETA_VERTICES",
]

MAX_THETA_VERTICES = 64
_log = logging.getLogger(__name__)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ThetaResult:
    value: float
    lower: float
    upper: float
    primal: np.ndarray  # feasible X, trace 1, objective >= lower
    dual: np.ndarray  # Y on edges; t = upper satisfies t I + Y - J PSD
    tolerance: float
    iterations: int
    converged: bool

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def theta_odd_cycle(n: int) -> float:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"closed form needs an odd n >= 3, got {n}")
    c = math.cos(math.pi / n)
    return n * c / (1 + c)


def _certify(g: Graph, x: np.ndarray, y_edges: np.ndarray, u: np.ndarray, v: np.ndarray):
    n = g.n
    J = np.ones((n, n))
    Y = np.zeros((n, n))
    Y[u, v] = y_edges
    Y[v, u] = y_edges
    M = J - Y
    lam = np.linalg.eigvalsh(M)
    slack = 4 * n * _EPS * max(1.0, np.abs(lam).max())
    upper = float(lam[-1] + slack)

    X = (x + x.T) / 2
    X[u, v] = 0.0
    X[v, u] = 0.0
    mu = np.linalg.eigvalsh(X)[0]
    shift = 4 * n * _EPS * max(1.0, np.abs(X).max())
    if mu < shift:
        X = X + (shift - mu) * np.eye(n)
    X = X / np.trace(X)
    lower = float(X.sum() - 4 * n * n * _EPS * max(1.0, np.abs(X).max()))
    return lower, upper, X, Y


def lovasz_theta(g: Graph, tolerance: float = 1e-7, max_iter: int = 200) -> ThetaResult:
    """Certified interval for theta(g); width at most ``2 * tolerance``
    unless the iteration cap is hit (``converged`` is then False)."""
    if not 1e-9 <= tolerance <= 1e-3:
        raise ValueError("tolerance must lie in [1e-9, 1e-3]")
    n = g.n
    if n > MAX_THETA_VERTICES:
        raise ValueError(f"theta SDP is limited to n <= {MAX_THETA_VERTICES}")
    edges = g.edges()
    u = np.array([e[0] for e in edges], dtype=int)
    v = np.array([e[1] for e in edges], dtype=int)
    m = 1 + len(edges)
    b = np.zeros(m)
    b[0] = 1.0
    C = np.ones((n, n))

    def A_op(X):
        out = np.empty(m)
        out[0] = np.trace(X)
        out[1:] = X[u, v] + X[v, u]  # X need not be symmetric here
        return out

    def At_op(y):
        Y = y[0] * np.eye(n)
        Y[u, v] += y[1:]
        Y[v, u] += y[1:]
        return Y

    def schur(X, Zi):
        M = np.empty((m, m))
        P = Zi @ X
        M[0, 0] = np.trace(P)
        if m > 1:
            cross = P[v, u] + P[u, v]
            M[0, 1:] = cross
            M[1:, 0] = cross
            ix = np.ix_
            M[1:, 1:] = (
                X[ix(v, u)] * Zi[ix(u, v)]
                + X[ix(v, v)] * Zi[ix(u, u)]
                + X[ix(u, u)] * Zi[ix(v, v)]
                + X[ix(u, v)] * Zi[ix(v, u)]
            )
        return M

    def max_step(S, dS):
        L = np.linalg.cholesky(S)
        W = np.linalg.solve(L, np.linalg.solve(L, dS).T)
        lam = np.linalg.eigvalsh((W + W.T) / 2)[0]
        return 1.0 if lam >= 0 else min(1.0, -1.0 / lam)

    X = np.eye(n) / n
    y = np.zeros(m)
    y[0] = n + 1.0
    Z = At_op(y) - C
    it = 0
    best = None
    for it in range(1, max_iter + 1):
        mu = np.sum(X * Z) / n
        Rd = C - At_op(y) + Z
        try:
            Zi = np.linalg.inv(Z)
        except np.linalg.LinAlgError:
            _log.debug("theta IPM: dual slack singular at iteration %d", it)
            break
        Zi = (Zi + Zi.T) / 2
        M = schur(X, Zi)
        try:
            factor = np.linalg.cholesky(M)
            solve_schur = lambda r: np.linalg.solve(factor.T, np.linalg.solve(factor, r))  # noqa: E731
        except np.linalg.LinAlgError:
            # near the optimum M loses definiteness numerically; fall back to least squares
            solve_schur = lambda r: np.linalg.lstsq(M, r, rcond=None)[0]  # noqa: E731

        def direction(sigma, corr):
            R = sigma * mu * np.eye(n) - corr
            rhs = A_op(R @ Zi - X @ Rd @ Zi) - b
            dy = solve_schur(rhs)
            dZ = At_op(dy) + Rd
            dX = R @ Zi - X - X @ dZ @ Zi
            dX = (dX + dX.T) / 2
            return dX, dy, dZ

        try:
            dXa, dya, dZa = direction(0.0, np.zeros((n, n)))
            ap = max_step(X, dXa)
            ad = max_step(Z, dZa)
            mu_aff = np.sum((X + ap * dXa) * (Z + ad * dZa)) / n
            sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
            dX, dy, dZ = direction(sigma, dXa @ dZa)
            ap = min(1.0, 0.95 * max_step(X, dX))
            ad = min(1.0, 0.95 * max_step(Z, dZ))
        except np.linalg.LinAlgError:
            # iterate numerically on the cone boundary; keep the best certificate so far
            _log.debug("theta IPM: lost definiteness at iteration %d", it)
            break
        X = X + ap * dX
        X = (X + X.T) / 2
        y = y + ad * dy
        Z = At_op(y) - C
        Z = (Z + Z.T) / 2
        gap = np.sum(X * Z)
        _log.debug("theta IPM it=%d gap=%.3e steps=(%.3f, %.3f)", it, gap, ap, ad)
        cert = _certify(g, X, y[1:], u, v)
        if best is None or cert[1] - cert[0] < best[1] - best[0]:
            best = cert
        if best[1] - best[0] <= tolerance:
            break
    if best is None:
        best = _certify(g, X, y[1:], u, v)
    lower, upper, Xc, Yc = best
    return ThetaResult(
        value=(lower + upper) / 2,
        lower=lower,
        upper=upper,
        primal=Xc,
        dual=Yc,
        tolerance=tolerance,
        iterations=it,
        converged=upper - lower <= 2 * tolerance,
    )


def theta_modified_schlafli_check(g: Graph | None = None, tolerance: float = 1e-7) -> ThetaResult:
    """Theta of the validated modified Schläfli fixture (expected 9)."""
    from .fixtures import load_modified_schlafli
    from .minrank import fixture_violations

    if g is None:
        g = load_modified_schlafli()
    if g.n != 28:
        raise ValueError(f"not the 28-vertex fixture (n={g.n})")
    bad = fixture_violations(g)
    if bad:
        raise ValueError("graph fails fixture validation: " + "; ".join(bad[:3]))
    return lovasz_theta(g, tolerance)
