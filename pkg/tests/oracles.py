"""Independent reference implementations used only by the tests.

Deliberately naive: brute force over subsets, third-party solvers, or
closed forms. None of them shares code with the package.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import networkx as nx
import numpy as np


def to_nx(g) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def brute_alpha(g) -> int:
    best = 0
    for r in range(g.n, 0, -1):
        for s in itertools.combinations(range(g.n), r):
            if all(not g.adjacent(a, b) for a, b in itertools.combinations(s, 2)):
                return r
    return best


def brute_clique_cover(g) -> int:
    """Chromatic number of the complement by trying every colouring size."""
    comp = nx.complement(to_nx(g))
    for k in range(1, g.n + 1):
        for colours in itertools.product(range(k), repeat=g.n):
            if colours[0] != 0:
                continue
            if all(colours[u] != colours[v] for u, v in comp.edges()):
                return k
    return g.n


def scipy_alpha_f(g) -> float:
    from scipy.optimize import linprog

    cliques = list(nx.find_cliques(to_nx(g)))
    a = [[1 if v in c else 0 for v in range(g.n)] for c in cliques]
    r = linprog(-np.ones(g.n), A_ub=a, b_ub=np.ones(len(cliques)), bounds=(0, None), method="highs")
    return -r.fun


def cvx_theta(g) -> float:
    import cvxpy as cp

    n = g.n
    X = cp.Variable((n, n), symmetric=True)
    cons = [X >> 0, cp.trace(X) == 1] + [X[u, v] == 0 for u, v in g.edges()]
    prob = cp.Problem(cp.Maximize(cp.sum(X)), cons)
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def brute_minrank_f2(g) -> int:
    """Minimum rank over GF(2) by enumerating every fitting matrix."""
    free = [(i, j) for i in range(g.n) for j in range(g.n) if i != j and g.adjacent(i, j)]
    best = g.n
    for bits in itertools.product((0, 1), repeat=len(free)):
        m = np.eye(g.n, dtype=np.uint8)
        for (i, j), b in zip(free, bits):
            m[i, j] = b
        best = min(best, gf2_rank(m))
    return best


def gf2_rank(m) -> int:
    m = np.array(m, dtype=np.uint8) % 2
    r = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def sympy_rank(m, p: int | None = None) -> int:
    import sympy

    M = sympy.Matrix(m)
    if p is None:
        return M.rank()
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    return DomainMatrix.from_Matrix(M).convert_to(GF(p)).rank()


def theta_odd_cycle_closed(n: int) -> float:
    return n * math.cos(math.pi / n) / (1 + math.cos(math.pi / n))


def brute_fstar(g, f, subsets=None) -> float:
    """f* via scipy on every nonempty subset (float check of the exact LP)."""
    from scipy.optimize import linprog

    n = g.n
    masks = subsets or list(range(1, 1 << n))
    a = [[1 if m >> x & 1 else 0 for x in range(n)] for m in masks]
    b = [float(f(m)) for m in masks]
    r = linprog(-np.ones(n), A_ub=a, b_ub=b, bounds=(0, None), method="highs")
    return -r.fun


def is_srg(g, v, k, lam, mu) -> bool:
    if g.n != v:
        return False
    a = g.adjacency.astype(int)
    a2 = a @ a
    for i in range(v):
        if a[i].sum() != k:
            return False
        for j in range(v):
            if i != j and a2[i, j] != (lam if a[i, j] else mu):
                return False
    return True


def frac_close(x: Fraction, y: float, tol: float = 1e-7) -> bool:
    return abs(float(x) - y) <= tol
