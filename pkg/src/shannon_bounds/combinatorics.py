"""Independence number, maximal cliques, and fractional / integral clique covers."""

from __future__ import annotations

from fractions import Fraction

from .graph import Graph, VertexSet, _bits
from .rational_lp import LE, LpCertificate, LpProblem, solve

__all__ = [
    "MAX_EXACT_VERTICES",
    "MAX_COVER_VERTICES",
    "independence_number",
    "maximum_independent_set",
    "maximum_clique",
    "maximal_cliques",
    "fractional_independence",
    "clique_cover_number",
    "minimum_clique_cover",
]

MAX_EXACT_VERTICES = 64
MAX_COVER_VERTICES = 30


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _color_order(rows: tuple[int, ...], cand: int) -> tuple[list[int], list[int]]:
    """Greedy colouring of ``cand`` (ascending vertex order).

    Returns vertices sorted by colour class and the running colour number,
    the usual bound of MCQ-style clique search.
    """
    order, bounds = [], []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~rows[v] & ~(1 << v)
            uncolored &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def _max_clique_mask(rows: tuple[int, ...], cand: int) -> int:
    best = 0
    best_size = 0

    def expand(current: int, size: int, cand: int) -> None:
        nonlocal best, best_size
        order, bounds = _color_order(rows, cand)
        for k in range(len(order) - 1, -1, -1):
            if size + bounds[k] <= best_size:
                return
            v = order[k]
            nxt = cand & rows[v]
            if nxt:
                expand(current | 1 << v, size + 1, nxt)
            elif size + 1 > best_size:
                best, best_size = current | 1 << v, size + 1
            cand &= ~(1 << v)

    if cand:
        expand(0, 0, cand)
    return best


def _check_size(g: Graph, limit: int, what: str) -> None:
    if g.n > limit:
        raise ValueError(f"{what} is limited to n <= {limit}, got n={g.n}")


def maximum_clique(g: Graph) -> VertexSet:
    _check_size(g, MAX_EXACT_VERTICES, "exact clique search")
    return VertexSet(_max_clique_mask(g.rows, (1 << g.n) - 1), g.n)


def maximum_independent_set(g: Graph) -> VertexSet:
    """A maximum independent set; the same input always yields the same set."""
    _check_size(g, MAX_EXACT_VERTICES, "exact independence search")
    full = (1 << g.n) - 1
    comp = tuple(full & ~r & ~(1 << i) for i, r in enumerate(g.rows))
    return VertexSet(_max_clique_mask(comp, full), g.n)


def independence_number(g: Graph) -> int:
    return len(maximum_independent_set(g))


def maximal_cliques(g: Graph) -> list[VertexSet]:
    """All maximal cliques (Bron-Kerbosch with Tomita pivoting), sorted by mask."""
    _check_size(g, MAX_EXACT_VERTICES, "clique enumeration")
    rows = g.rows
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot_pool = p | x
        pivot = max(_bits(pivot_pool), key=lambda u: _popcount(p & rows[u]))
        for v in _bits(p & ~rows[pivot]):
            bk(r | 1 << v, p & rows[v], x & rows[v])
            p &= ~(1 << v)
            x |= 1 << v

    bk(0, (1 << g.n) - 1, 0)
    return [VertexSet(m, g.n) for m in sorted(out)]


def fractional_independence(g: Graph) -> tuple[Fraction, LpCertificate]:
    """alpha_f over maximal-clique constraints.

    The certificate's dual vector is a fractional clique cover (one weight
    per clique of :func:`maximal_cliques`, same order) of equal value.
    """
    cliques = maximal_cliques(g)
    rows = [([1 if c.mask >> v & 1 else 0 for v in range(g.n)], LE, 1) for c in cliques]
    cert = solve(LpProblem.build([1] * g.n, rows))
    return cert.value, cert


def minimum_clique_cover(g: Graph) -> list[VertexSet]:
    """A minimum family of cliques covering every vertex (branch and bound)."""
    _check_size(g, MAX_COVER_VERTICES, "exact clique cover")
    full = (1 << g.n) - 1
    cliques = [c.mask for c in maximal_cliques(g)]
    containing = [[c for c in cliques if c >> v & 1] for v in range(g.n)]
    omega = max(_popcount(c) for c in cliques)

    # greedy start: repeatedly take the clique covering most uncovered vertices
    best: list[int] = []
    left = full
    while left:
        c = max(cliques, key=lambda c: (_popcount(c & left), -c))
        best.append(c)
        left &= ~c

    def lower_bound(left: int) -> int:
        indep = 0
        avail = left
        while avail:
            v = (avail & -avail).bit_length() - 1
            indep += 1
            avail &= ~g.rows[v] & ~(1 << v)
        return max(indep, -(-_popcount(left) // omega))

    chosen: list[int] = []

    def search(left: int) -> None:
        nonlocal best
        if not left:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + lower_bound(left) >= len(best):
            return
        v = min(_bits(left), key=lambda u: (len(containing[u]), u))
        options = sorted(containing[v], key=lambda c: (-_popcount(c & left), c))
        seen = set()
        for c in options:
            part = c & left
            if part in seen:
                continue
            seen.add(part)
            chosen.append(c)
            search(left & ~c)
            chosen.pop()

    search(full)
    return [VertexSet(c, g.n) for c in best]


def clique_cover_number(g: Graph) -> int:
    return len(minimum_clique_cover(g))
