"""Fitting matrices, exact ranks over Q and prime fields, exact minrank for
small graphs, and the edge-deletion lower-bound technique for minrank."""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import combinatorics as comb
from .fixtures import constraints as fx
from .graph import Graph, VertexSet, _bits, as_mask, induced_subgraph
from .rational_lp import format_rational, parse_rational

__all__ = [
    "FieldSpec",
    "FittingMatrix",
    "FitError",
    "TimsPreconditionError",
    "DeletionStep",
    "DeletionScript",
    "ProofOutcome",
    "rank",
    "check_fits",
    "minrank_upper",
    "minrank_exact_small",
    "minrank_search",
    "clique_partition_matrix",
    "block_diagonal",
    "extend_with_identity",
    "tims_step",
    "replay_deletion_proof",
    "fixture_violations",
    "validate_fixture",
    "format_matrix",
    "parse_matrix",
    "format_script",
    "parse_script",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not 2 <= self.p < 2**31 or not _is_prime(self.p):
                raise ValueError(f"{self.p} is not a prime below 2^31")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = str(text).strip()
        if t.upper() in ("Q", "R", "QQ"):
            return cls(None)
        if t.upper().startswith("F"):
            t = t[1:].lstrip("_")
        return cls(int(t))

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def element(self, x) -> Fraction | int:
        try:
            x = Fraction(operator.index(x))
        except TypeError:
            x = Fraction(x)
        if self.p is None:
            return x
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
        return x.numerator * pow(den, -1, self.p) % self.p

    def __str__(self) -> str:
        return "Q" if self.p is None else str(self.p)


# rank -------------------------------------------------------------------


def _rank_rows(rows: list[list], field: FieldSpec) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    p = field.p
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        top = rows[r]
        if p is None:
            inv = 1 / top[c]
        else:
            inv = pow(top[c], -1, p)
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv if p is None else f * inv % p
                row = rows[i]
                if p is None:
                    for j in range(c, ncols):
                        if top[j]:
                            row[j] -= f * top[j]
                else:
                    for j in range(c, ncols):
                        if top[j]:
                            row[j] = (row[j] - f * top[j]) % p
        r += 1
        if r == len(rows):
            break
    return r


def rank(m, field: FieldSpec) -> int:
    """Exact rank of a (possibly rectangular) matrix over ``field``.

    Entries may be ints, Fractions, or anything ``Fraction`` accepts; over
    F_p they are reduced modulo p first.
    """
    rows = [[field.element(x) for x in row] for row in m]
    return _rank_rows(rows, field)


# fitting matrices ------------------------------------------------------


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class FittingMatrix:
    field: FieldSpec
    entries: tuple[tuple, ...]
    graph: Graph = field(compare=False)

    @classmethod
    def of(cls, matrix, fld: FieldSpec, graph: Graph) -> "FittingMatrix":
        entries = tuple(tuple(fld.element(x) for x in row) for row in matrix)
        return cls(fld, entries, graph)

    @property
    def n(self) -> int:
        return len(self.entries)

    def violations(self) -> list[str]:
        g = self.graph
        if self.n != g.n or any(len(r) != g.n for r in self.entries):
            return [f"matrix is not {g.n}x{g.n}"]
        out = []
        for i in range(g.n):
            if not self.entries[i][i]:
                out.append(f"zero diagonal at {g.label(i)}")
            for j in range(g.n):
                if i != j and self.entries[i][j] and not g.adjacent(i, j):
                    out.append(f"nonzero entry at non-adjacent ({g.label(i)}, {g.label(j)})")
        return out

    def rank(self) -> int:
        return _rank_rows([list(r) for r in self.entries], self.field)


def check_fits(b: FittingMatrix) -> bool:
    return not b.violations()


def minrank_upper(g: Graph, b: FittingMatrix) -> int:
    """``rank(b)``, a certified upper bound on minrk over ``b.field``."""
    if b.graph is not g and b.graph != g:
        raise FitError("fitting matrix is bound to a different graph")
    bad = b.violations()
    if bad:
        raise FitError("; ".join(bad[:5]))
    return b.rank()


def clique_partition_matrix(g: Graph, cover: Sequence[VertexSet], fld: FieldSpec) -> FittingMatrix:
    """Block matrix of ones over a clique cover (made a partition first).

    Its rank is the number of non-empty parts, so this certifies
    ``minrk_F(g) <= clique cover number`` over every field.
    """
    part = [-1] * g.n
    for k, c in enumerate(cover):
        for v in c:
            if part[v] < 0:
                part[v] = k
    if min(part) < 0:
        raise ValueError("cover misses a vertex")
    m = [[1 if part[i] == part[j] else 0 for j in range(g.n)] for i in range(g.n)]
    return FittingMatrix.of(m, fld, g)


def block_diagonal(blocks: Sequence[FittingMatrix], graph: Graph) -> FittingMatrix:
    """Direct sum of fitting matrices, bound to ``graph`` (the disjoint union)."""
    flds = {b.field for b in blocks}
    if len(flds) != 1:
        raise ValueError("blocks must share one field")
    fld = flds.pop()
    n = sum(b.n for b in blocks)
    m = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b.entries):
            m[off + i][off : off + b.n] = list(row)
        off += b.n
    return FittingMatrix.of(m, fld, graph)


def extend_with_identity(b: FittingMatrix, g: Graph, subset: VertexSet | Iterable[int] | int) -> FittingMatrix:
    """Fit ``g`` by placing ``b`` on ``g[subset]`` and 1 on every other diagonal entry.

    ``b`` indexes the subset in increasing vertex order; the rank grows by
    the number of added vertices (e.g. an apex on top of its core).
    """
    mask = as_mask(subset, g.n)
    idx = list(_bits(mask))
    if len(idx) != b.n:
        raise ValueError(f"matrix is {b.n}x{b.n} but the subset has {len(idx)} vertices")
    one = b.field.element(1)
    m = [[one if i == j else 0 for j in range(g.n)] for i in range(g.n)]
    for a, i in enumerate(idx):
        for c, j in enumerate(idx):
            m[i][j] = b.entries[a][c]
    return FittingMatrix.of(m, b.field, g)


# exact minrank ---------------------------------------------------------


class _Span:
    """Row-echelon basis over F_p with canonical (reduced) form."""

    def __init__(self, p: int, n: int, rows: dict[int, tuple[int, ...]] | None = None):
        self.p, self.n = p, n
        self.rows: dict[int, tuple[int, ...]] = dict(rows or {})

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        p = self.p
        for c in sorted(self.rows):
            f = v[c]
            if f:
                r = self.rows[c]
                v = [(a - f * b) % p for a, b in zip(v, r)]
        return v

    def add(self, v: Sequence[int]) -> "_Span | None":
        w = self.reduce(v)
        c = next((j for j, x in enumerate(w) if x), None)
        if c is None:
            return None
        p = self.p
        inv = pow(w[c], -1, p)
        w = tuple(x * inv % p for x in w)
        rows = {}
        for k, r in self.rows.items():
            f = r[c]
            rows[k] = tuple((a - f * b) % p for a, b in zip(r, w)) if f else r
        rows[c] = w
        return _Span(p, self.n, rows)

    def key(self) -> tuple:
        return tuple(sorted(self.rows.items()))

    def __len__(self) -> int:
        return len(self.rows)

    def fitting_vector(self, i: int, allowed: int) -> tuple[int, ...] | None:
        """A span vector with ``v[i] = 1`` and zeros outside ``allowed``."""
        zero_cols = [j for j in range(self.n) if j != i and not allowed >> j & 1]
        order = zero_cols + [i] + [j for j in range(self.n) if j != i and allowed >> j & 1]
        vecs = [list(r) for r in self.rows.values()]
        p = self.p
        r = 0
        for c in order:
            piv = next((k for k in range(r, len(vecs)) if vecs[k][c]), None)
            if piv is None:
                continue
            vecs[r], vecs[piv] = vecs[piv], vecs[r]
            inv = pow(vecs[r][c], -1, p)
            vecs[r] = [x * inv % p for x in vecs[r]]
            for k in range(len(vecs)):
                if k != r and vecs[k][c]:
                    f = vecs[k][c]
                    vecs[k] = [(a - f * b) % p for a, b in zip(vecs[k], vecs[r])]
            if c == i:
                return tuple(vecs[r])
            r += 1
        return None


def _fits_rank_at_most(g: Graph, p: int, target: int) -> list[tuple[int, ...]] | None:
    """Rows of a fitting matrix over F_p with rank <= target, or None.

    Rows are chosen one vertex at a time with diagonal 1 (row scaling keeps
    rank). A row inside the current span leaves the span unchanged, so one
    such row stands in for all of them; rows outside the span are
    deduplicated by the span they produce.
    """
    n = g.n
    patterns = []
    for i in range(n):
        nbrs = g.neighbors(i)
        patterns.append(nbrs)
    seen: set[tuple] = set()

    def search(i: int, span: _Span, rows: list) -> list | None:
        if i == n:
            return list(rows)
        key = (i, span.key())
        if key in seen:
            return None
        seen.add(key)
        closed = g.rows[i] | 1 << i
        inside = span.fitting_vector(i, closed) if len(span) else None
        if inside is not None:
            found = search(i + 1, span, rows + [inside])
            if found is not None:
                return found
        if len(span) >= target:
            return None
        nbrs = patterns[i]
        for vals in itertools.product(range(p), repeat=len(nbrs)):
            v = [0] * n
            v[i] = 1
            for j, x in zip(nbrs, vals):
                v[j] = x
            grown = span.add(v)
            if grown is None:
                continue
            found = search(i + 1, grown, rows + [tuple(v)])
            if found is not None:
                return found
        return None

    return search(0, _Span(p, n), [])


def _components(g: Graph) -> list[int]:
    left = (1 << g.n) - 1
    comps = []
    while left:
        seed = left & -left
        comp, frontier = seed, seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~comp
            comp |= nxt
        comps.append(comp)
        left &= ~comp
    return comps


def _search_allowed(g: Graph, fld: FieldSpec) -> bool:
    if fld.p == 2:
        return g.num_edges <= 20
    return fld.p is not None and g.n <= 5


def minrank_search(g: Graph, fld: FieldSpec) -> tuple[int, FittingMatrix]:
    """Exact minrk over ``fld`` together with an optimal fitting matrix.

    Works per connected component (minrank is additive over disjoint
    unions). A component whose independence and clique cover numbers
    coincide is settled without search; otherwise an exhaustive search
    runs, limited to F_2 with at most 20 edges or any prime field with at
    most 5 vertices. Over Q only the first kind of component is decidable.
    """
    blocks = []
    total = 0
    comps = _components(g)
    for comp in comps:
        h = induced_subgraph(g, comp)
        a = comb.independence_number(h)
        cover = comb.minimum_clique_cover(h)
        if a == len(cover):
            blocks.append((comp, clique_partition_matrix(h, cover, fld)))
            total += a
            continue
        if not _search_allowed(h, fld):
            raise ValueError(
                f"exact minrank over {fld} needs search on a component with n={h.n}, "
                f"|E|={h.num_edges}; outside the supported range"
            )
        best = None
        for target in range(a, len(cover)):
            rows = _fits_rank_at_most(h, fld.p, target)
            if rows is not None:
                best = FittingMatrix.of(rows, fld, h)
                break
        if best is None:
            best = clique_partition_matrix(h, cover, fld)
        r = best.rank()
        blocks.append((comp, best))
        total += r
    # reassemble in the original vertex order
    m = [[0] * g.n for _ in range(g.n)]
    for comp, b in blocks:
        idx = _bits(comp)
        for a_, i in enumerate(idx):
            for b_, j in enumerate(idx):
                m[i][j] = b.entries[a_][b_]
    witness = FittingMatrix.of(m, fld, g)
    assert witness.rank() == total and check_fits(witness)
    return total, witness


def minrank_exact_small(g: Graph, fld: FieldSpec) -> int:
    return minrank_search(g, fld)[0]


# edge deletion technique -----------------------------------------------


class TimsPreconditionError(ValueError):
    """A precondition of the edge-deletion step failed.

    ``condition`` names the failed check; ``step`` is set when raised from a
    script replay.
    """

    def __init__(self, condition: str, message: str, step: int | None = None):
        self.condition = condition
        self.step = step
        prefix = f"step {step}: " if step is not None else ""
        super().__init__(f"{prefix}{condition}: {message}")


def tims_step(g: Graph, independent: VertexSet | Iterable[int] | int, u: int, w: int) -> Graph:
    """Delete the edge ``(u, w)`` after checking every hypothesis of the lemma.

    With ``I`` a maximum independent set, ``u`` outside it and
    ``J = N(u) & I``, the vertex ``w`` must be a neighbour of ``u`` outside
    ``I + u`` with no neighbour in ``J``. Then minrk(g) = alpha(g) holds iff
    it holds for the returned graph.
    """
    imask = as_mask(independent, g.n)
    if not g.is_independent(imask):
        raise TimsPreconditionError("independent", "I is not an independent set")
    if imask >> u & 1:
        raise TimsPreconditionError("u-outside-I", f"u={g.label(u)} lies in I")
    j = g.rows[u] & imask
    if not j:
        raise TimsPreconditionError("J-nonempty", f"N({g.label(u)}) misses I, so I is not maximum")
    if w == u or imask >> w & 1:
        raise TimsPreconditionError("w-outside-I-u", f"w={g.label(w)} lies in I or equals u")
    if not g.adjacent(u, w):
        raise TimsPreconditionError("w-adjacent-u", f"{g.label(w)} is not adjacent to {g.label(u)}")
    if g.rows[w] & j:
        bad = ",".join(g.label(v) for v in _bits(g.rows[w] & j))
        raise TimsPreconditionError("w-avoids-J", f"w={g.label(w)} is adjacent to J-vertex {bad}")
    alpha = comb.independence_number(g)
    if bin(imask).count("1") != alpha:
        raise TimsPreconditionError("I-maximum", f"|I|={bin(imask).count('1')} but alpha={alpha}")
    return g.without_edge(u, w)


@dataclass(frozen=True)
class DeletionStep:
    independent: tuple[str, ...]
    u: str
    w: str


@dataclass(frozen=True)
class DeletionScript:
    """Steps use vertex labels so scripts survive re-indexing."""

    steps: tuple[DeletionStep, ...]
    final: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ProofOutcome:
    verdict: str  # "minrk > alpha" or "inconclusive"
    alpha: int
    alpha_residual: int
    residual_witness: tuple[str, ...]
    trail: tuple[str, ...]
    residual: Graph

    @property
    def proves_gap(self) -> bool:
        return self.verdict == "minrk > alpha"


def replay_deletion_proof(g: Graph, script: DeletionScript) -> ProofOutcome:
    """Apply each step to the current graph, re-checking its hypotheses.

    If the residual graph H has alpha(H) > alpha(g), the chain of
    equivalences shows minrk(g) != alpha(g), i.e. minrk(g) >= alpha(g) + 1.
    """
    alpha = comb.independence_number(g)
    trail = [f"alpha(G) = {alpha}"]
    cur = g
    for k, step in enumerate(script.steps):
        imask = VertexSet.of((g.index_of(x) for x in step.independent), g.n)
        u, w = g.index_of(step.u), g.index_of(step.w)
        try:
            cur = tims_step(cur, imask, u, w)
        except TimsPreconditionError as exc:
            raise TimsPreconditionError(exc.condition, str(exc), step=k) from None
        jset = ",".join(cur.label(v) for v in _bits(cur.rows[u] & imask.mask))
        trail.append(f"step {k}: delete ({step.u},{step.w}); J={{{jset}}}")
    witness = comb.maximum_independent_set(cur)
    a_h = len(witness)
    names = tuple(cur.label(v) for v in witness)
    if script.final is not None:
        fmask = VertexSet.of((g.index_of(x) for x in script.final), g.n)
        if not cur.is_independent(fmask):
            raise ValueError("claimed final set is not independent in the residual graph")
        if len(fmask) != a_h:
            raise ValueError(f"claimed final set has size {len(fmask)}, alpha(H) = {a_h}")
        names = tuple(script.final)
    trail.append(f"alpha(H) = {a_h} witnessed by {{{','.join(names)}}}")
    verdict = "minrk > alpha" if a_h > alpha else "inconclusive"
    return ProofOutcome(verdict, alpha, a_h, names, tuple(trail), cur)


# fixture validation ---------------------------------------------------------


def _srg_violations(h: Graph, params: tuple[int, int, int, int]) -> list[str]:
    v, k, lam, mu = params
    if h.n != v:
        return [f"expected {v} vertices, got {h.n}"]
    out = []
    for i in range(h.n):
        if h.degree(i) != k:
            out.append(f"vertex {h.label(i)} has degree {h.degree(i)} != {k}")
    for i, j in itertools.combinations(range(h.n), 2):
        common = bin(h.rows[i] & h.rows[j]).count("1")
        want = lam if h.adjacent(i, j) else mu
        if common != want:
            out.append(f"pair ({h.label(i)},{h.label(j)}) has {common} common neighbours != {want}")
            if len(out) > 10:
                break
    return out


def srg_parameters_hold(h: Graph, params: tuple[int, int, int, int]) -> bool:
    return not _srg_violations(h, params)


def fixture_violations(g: Graph) -> list[str]:
    """Every textual constraint on the modified Schläfli fixture that fails."""
    if g.n != 28:
        raise ValueError(f"the fixture has 28 vertices, got {g.n}")
    try:
        idx = {name: g.index_of(name) for name in fx.CORE + (fx.APEX,)}
    except (KeyError, ValueError):
        return ["labels '1'..'28' are not all present"]
    out = []
    core = induced_subgraph(g, [idx[x] for x in fx.CORE])
    out += [f"core: {m}" for m in _srg_violations(core, (27, 10, 1, 5))]

    def nbr_names(graph: Graph, name: str) -> set[str]:
        return {graph.label(v) for v in graph.neighbors(idx[name])}

    if nbr_names(g, fx.APEX) != set(fx.APEX_NEIGHBORS):
        out.append(f"apex neighbours {sorted(nbr_names(g, fx.APEX), key=int)} differ from the figure")
    if nbr_names(g, "6") != set(fx.NEIGHBORS_6):
        out.append("N(6) differs from the listed neighbourhood")
    if nbr_names(g, "17") - {"6"} != set(fx.NEIGHBORS_17_WITHOUT_6):
        out.append("N(17) differs from the listed neighbourhood")
    imask = VertexSet.of((idx[x] for x in fx.MAX_INDEPENDENT), g.n)
    if not g.is_independent(imask):
        out.append("I is not independent")
    alpha = comb.independence_number(g)
    if alpha != len(imask):
        out.append(f"alpha(G) = {alpha}, expected {len(imask)}")
    h = g
    for a, b in fx.DELETED_EDGES:
        if not h.adjacent(idx[a], idx[b]):
            out.append(f"edge ({a},{b}) to delete is missing")
            return out
        h = h.without_edge(idx[a], idx[b])
    for targets, pivot in ((fx.PIVOT_6_TARGETS, "6"), (fx.PIVOT_17_TARGETS, "17")):
        j = g.rows[idx[pivot]] & imask.mask
        for t in targets:
            if g.rows[idx[t]] & j:
                out.append(f"w={t} touches J(u={pivot})")
    rmask = VertexSet.of((idx[x] for x in fx.RESIDUAL_INDEPENDENT), g.n)
    if not h.is_independent(rmask):
        out.append("residual witness is not independent after the deletions")
    a_h = comb.independence_number(h)
    if a_h != len(rmask):
        out.append(f"alpha(H) = {a_h}, expected {len(rmask)}")
    return out


def validate_fixture(g: Graph) -> bool:
    return not fixture_violations(g)


# text formats ----------------------------------------------------------------


def format_matrix(b: FittingMatrix) -> str:
    lines = [f"{b.n} {b.field}"]
    for row in b.entries:
        lines.append(" ".join(format_rational(x) if b.field.is_rational else str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, graph: Graph) -> FittingMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("matrix header must be 'n field'")
    n, fld = int(head[0]), FieldSpec.parse(head[1])
    rows = [[parse_rational(t) for t in ln.split()] for ln in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} entries")
    return FittingMatrix.of(rows, fld, graph)


def read_matrix(path: str | Path, graph: Graph) -> FittingMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"), graph)


def format_script(script: DeletionScript) -> str:
    lines = [f"I:{{{','.join(s.independent)}}} u:{s.u} w:{s.w}" for s in script.steps]
    if script.final is not None:
        lines.append(f"final:{{{','.join(script.final)}}}")
    return "\n".join(lines) + "\n"


def _parse_set(tok: str) -> tuple[str, ...]:
    body = tok.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected '{{...}}', got {tok!r}")
    return tuple(x.strip() for x in body[1:-1].split(",") if x.strip())


def parse_script(text: str) -> DeletionScript:
    steps = []
    final = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("final:"):
            final = _parse_set(line[len("final:") :])
            continue
        fields = dict(tok.split(":", 1) for tok in line.split())
        try:
            steps.append(DeletionStep(_parse_set(fields["I"]), fields["u"], fields["w"]))
        except KeyError as exc:
            raise ValueError(f"line {lineno}: missing field {exc}") from None
    return DeletionScript(tuple(steps), final)


def read_script(path: str | Path) -> DeletionScript:
    return parse_script(Path(path).read_text(encoding="utf-8"))
