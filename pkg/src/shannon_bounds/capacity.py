"""The f* linear program over pluggable bound oracles.

For a graph function ``f`` and a family of vertex subsets, ``f*`` is

    max sum_x w(x)  s.t.  sum_{x in S} w(x) <= f(G_S)  for S in family,

solved exactly through its covering dual

    min sum_S q(S) f(G_S)  s.t.  sum_{S ∋ x} q(S) >= 1.

Which capacity/broadcast statement a value supports is decided by the
oracle's flags, never implied by the value alone.
"""

from __future__ import annotations

import math
import threading
from pathlib import Path
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import combinatorics as comb
from .graph import Graph, VertexSet, _bits, as_mask, disjoint_union, induced_subgraph
from .minrank import FieldSpec, FittingMatrix, check_fits, minrank_exact_small, parse_matrix
from .rational_lp import GE, LpCertificate, LpProblem, solve
from .cache import ResultCache, theta_interval

__all__ = [
    "OracleFlags",
    "BoundOracle",
    "SubsetFamily",
    "FStarResult",
    "UnionBound",
    "THETA_BOUND",
    "BROADCAST_BOUND",
    "VALUE_ONLY",
    "fstar",
    "fstar_full",
    "make_minrank_oracle",
    "make_exact_minrank_oracle",
    "cycle_minrank_table",
    "make_theta_oracle",
    "make_independence_oracle",
    "make_fractional_independence_oracle",
    "make_clique_cover_oracle",
    "geometric_mean_oracle",
    "union_bound_corollary",
    "optimize_geometric_mean",
    "check_additivity",
    "round_up",
    "parse_oracle_table",
    "read_oracle_table",
    "parse_family",
    "read_family",
    "format_family",
]

MAX_FULL_VERTICES = 16
ROUNDING_DENOMINATOR = 10**9

THETA_BOUND = "Theta(G) <= f*(G): f bounds alpha and is submultiplicative"
BROADCAST_BOUND = "beta(G) <= f*(G): f bounds the broadcast rate"
VALUE_ONLY = "LP value only: oracle flags license no capacity claim"


def round_up(x: float, denominator: int = ROUNDING_DENOMINATOR) -> Fraction:
    """Smallest multiple of 1/denominator that is >= x (outward rounding)."""
    if not math.isfinite(x):
        raise ValueError(f"cannot round {x}")
    q = Fraction(x)
    return Fraction(math.ceil(q * denominator), denominator)


@dataclass(frozen=True)
class OracleFlags:
    bounds_independence: bool = False
    submultiplicative: bool = False
    superadditive: bool = False
    clique_value_one: bool = False
    bounds_broadcast: bool = False

    @property
    def licenses_theta(self) -> bool:
        return self.bounds_independence and self.submultiplicative


Evaluator = Callable[[Graph, int], Fraction]


class BoundOracle:
    """A graph function evaluated on induced subgraphs, memoised.

    ``evaluator(parent, mask)`` returns the value on ``parent[mask]``. By
    default results are cached per induced subgraph (labels ignored);
    evaluators that depend on the parent vertex set pass ``keyed_by_parent``.
    The cache is shared across threads behind a lock.
    """

    def __init__(
        self,
        name: str,
        evaluator: Evaluator,
        flags: OracleFlags,
        provenance: Mapping[str, str] | None = None,
        keyed_by_parent: bool = False,
    ):
        self.name = name
        self.flags = flags
        self.provenance = dict(provenance or {})
        self._evaluator = evaluator
        self._keyed_by_parent = keyed_by_parent
        self._cache: dict[tuple, Fraction] = {}
        self._lock = threading.Lock()
        self.evaluations = 0
        if flags.bounds_independence and self(Graph(1, (0,))) < 1:
            raise ValueError(f"oracle {name} claims to bound alpha but is < 1 on K_1")
        if flags.clique_value_one:
            for m in (1, 2, 3):
                k = Graph(m, tuple(((1 << m) - 1) & ~(1 << i) for i in range(m)))
                if self(k) != 1:
                    raise ValueError(f"oracle {name} claims value one on cliques but f(K_{m}) = {self(k)}")

    def _key(self, g: Graph, mask: int) -> tuple:
        if self._keyed_by_parent:
            return (g.canonical_key(), mask)
        if mask == (1 << g.n) - 1:
            return (g.canonical_key(),)
        return (induced_subgraph(g, mask).canonical_key(),)

    def evaluate(self, g: Graph, s: VertexSet | Iterable[int] | int) -> Fraction:
        mask = as_mask(s, g.n)
        if not mask:
            raise ValueError("oracle evaluated on the empty set")
        key = self._key(g, mask)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        value = Fraction(self._evaluator(g, mask))
        if value < 0:
            raise ValueError(f"oracle {self.name} returned a negative value {value}")
        with self._lock:
            self._cache.setdefault(key, value)
            self.evaluations += 1
        return value

    def __call__(self, g: Graph) -> Fraction:
        return self.evaluate(g, (1 << g.n) - 1)

    def __repr__(self) -> str:
        return f"BoundOracle({self.name!r})"


def _sub(g: Graph, mask: int) -> Graph:
    return g if mask == (1 << g.n) - 1 else induced_subgraph(g, mask)


def _is_complete(h: Graph) -> bool:
    return h.num_edges == h.n * (h.n - 1) // 2


# oracles --------------------------------------------------------------


_MINRANK_PROVENANCE = {
    "bounds_independence": "alpha <= minrk_F via the rank of a fitting matrix",
    "submultiplicative": "Kronecker products of fitting matrices fit strong products",
    "superadditive": "minrk_F is additive over disjoint unions",
    "clique_value_one": "the all-ones matrix fits a clique",
    "bounds_broadcast": "beta <= minrk_F over finite fields (linear index codes)",
}


def _fallback_minrank(h: Graph, fld: FieldSpec) -> Fraction:
    # clique cover matrices fit over any field; the identity fits everything
    if _is_complete(h):
        return Fraction(1)
    if h.n <= comb.MAX_COVER_VERTICES:
        return Fraction(comb.clique_cover_number(h))
    return Fraction(h.n)


def make_minrank_oracle(
    fld: FieldSpec,
    table: Mapping | None = None,
    graph: Graph | None = None,
) -> BoundOracle:
    """Upper bounds on minrk over ``fld``.

    ``table`` maps vertex sets of ``graph`` to ``(value, certificate)``;
    the certificate is a :class:`FittingMatrix` fitting the induced
    subgraph with rank <= value, or the string ``"exact-search"``. Every
    entry is checked here. Other subgraphs get the clique cover number.
    """
    entries: dict[int, Fraction] = {}
    if table:
        if graph is None:
            raise ValueError("a minrank table needs the graph its vertex sets refer to")
        for s, spec in table.items():
            mask = as_mask(s, graph.n)
            value, cert = spec if isinstance(spec, tuple) else (spec, None)
            value = Fraction(value)
            h = induced_subgraph(graph, mask)
            if isinstance(cert, FittingMatrix):
                if cert.field != fld:
                    raise ValueError(f"certificate for {VertexSet(mask, graph.n)} is over {cert.field}, not {fld}")
                if cert.graph.rows != h.rows or not check_fits(cert):
                    raise ValueError(f"certificate does not fit the subgraph on {VertexSet(mask, graph.n)}")
                if cert.rank() > value:
                    raise ValueError(f"certificate rank {cert.rank()} exceeds claimed value {value}")
            elif cert == "exact-search":
                exact = minrank_exact_small(h, fld)
                if exact > value:
                    raise ValueError(f"exact minrank {exact} exceeds claimed value {value}")
            else:
                raise ValueError(f"uncertified table entry for {VertexSet(mask, graph.n)}")
            entries[mask] = value
    bound_key = graph.canonical_key() if graph is not None else None

    def evaluator(g: Graph, mask: int) -> Fraction:
        if entries and g.canonical_key() == bound_key and mask in entries:
            return entries[mask]
        return _fallback_minrank(_sub(g, mask), fld)

    flags = OracleFlags(True, True, True, True, bounds_broadcast=not fld.is_rational)
    return BoundOracle(f"minrk[{fld}]", evaluator, flags, _MINRANK_PROVENANCE, keyed_by_parent=bool(entries))


def cycle_minrank_table(n: int, fld: FieldSpec) -> dict[int, tuple[Fraction, object]]:
    """Certified minrank table for every vertex subset of the n-cycle.

    Proper subsets induce disjoint paths, where alpha equals the clique
    cover number; entries carry ``exact-search`` certificates and are
    re-verified when the oracle is built. The whole cycle gets a clique
    partition matrix of rank (n + 1) / 2 for odd n.
    """
    from .graph import cycle
    from .minrank import clique_partition_matrix

    g = cycle(n)
    full = (1 << n) - 1
    table: dict[int, tuple[Fraction, object]] = {}
    for mask in range(1, full):
        h = induced_subgraph(g, mask)
        table[mask] = (Fraction(comb.independence_number(h)), "exact-search")
    cover = comb.minimum_clique_cover(g)
    b = clique_partition_matrix(g, cover, fld)
    table[full] = (Fraction(b.rank()), b)
    return table


def make_exact_minrank_oracle(fld: FieldSpec) -> BoundOracle:
    """Exact minrk over ``fld`` on every subgraph (small graphs only)."""

    def evaluator(g: Graph, mask: int) -> Fraction:
        return Fraction(minrank_exact_small(_sub(g, mask), fld))

    flags = OracleFlags(True, True, True, True, bounds_broadcast=not fld.is_rational)
    return BoundOracle(f"minrk-exact[{fld}]", evaluator, flags, _MINRANK_PROVENANCE)


def make_theta_oracle(tolerance: float = 1e-7, cache: ResultCache | None = None) -> BoundOracle:
    """Certified upper end of theta, rounded up onto a 1e-9 grid.

    Cliques and edgeless graphs get their exact values 1 and n. With a
    :class:`ResultCache`, SDP results persist across processes.
    """

    def evaluator(g: Graph, mask: int) -> Fraction:
        h = _sub(g, mask)
        if _is_complete(h):
            return Fraction(1)
        if h.num_edges == 0:
            return Fraction(h.n)
        return round_up(theta_interval(h, tolerance, cache)[1])

    flags = OracleFlags(bounds_independence=True, submultiplicative=True, clique_value_one=True)
    provenance = {
        "bounds_independence": "Lovász: alpha <= Theta <= theta",
        "submultiplicative": "theta is multiplicative under the strong product",
        "clique_value_one": "theta(K_m) = 1",
    }
    return BoundOracle(f"theta[tol={tolerance:g}]", evaluator, flags, provenance)


def make_independence_oracle() -> BoundOracle:
    def evaluator(g: Graph, mask: int) -> Fraction:
        return Fraction(comb.independence_number(_sub(g, mask)))

    flags = OracleFlags(bounds_independence=True, superadditive=True, clique_value_one=True)
    provenance = {"superadditive": "alpha(G+H) = alpha(G) + alpha(H)", "clique_value_one": "alpha(K_m) = 1"}
    return BoundOracle("alpha", evaluator, flags, provenance)


def make_fractional_independence_oracle() -> BoundOracle:
    def evaluator(g: Graph, mask: int) -> Fraction:
        return comb.fractional_independence(_sub(g, mask))[0]

    flags = OracleFlags(True, True, True, True, bounds_broadcast=True)
    provenance = {
        "bounds_independence": "alpha_f is an LP relaxation of alpha",
        "submultiplicative": "products of fractional clique covers cover the strong product",
        "superadditive": "alpha_f(G+H) = alpha_f(G) + alpha_f(H)",
        "bounds_broadcast": "beta <= alpha_f (fractional clique cover codes)",
    }
    return BoundOracle("alpha_f", evaluator, flags, provenance)


def make_clique_cover_oracle() -> BoundOracle:
    def evaluator(g: Graph, mask: int) -> Fraction:
        return Fraction(comb.clique_cover_number(_sub(g, mask)))

    flags = OracleFlags(True, True, True, True, bounds_broadcast=True)
    provenance = {
        "submultiplicative": "products of clique covers cover the strong product",
        "bounds_broadcast": "beta <= clique cover number",
    }
    return BoundOracle("clique-cover", evaluator, flags, provenance)


def geometric_mean_oracle(a, theta: BoundOracle, base: BoundOracle) -> BoundOracle:
    """``theta^a * base^(1-a)``, rounded up; inherits the Theta-licensing flags."""
    a = Fraction(a)
    if not 0 <= a <= 1:
        raise ValueError("exponent must lie in [0, 1]")
    for o in (theta, base):
        if not o.flags.licenses_theta:
            raise ValueError(f"oracle {o.name} is not a submultiplicative bound on alpha")

    def evaluator(g: Graph, mask: int) -> Fraction:
        t, b = theta.evaluate(g, mask), base.evaluate(g, mask)
        if a == 1:
            return t
        if a == 0:
            return b
        if t == b:
            return t
        x = math.exp(float(a) * math.log(t) + float(1 - a) * math.log(b))
        return round_up(x * (1 + 1e-13))

    flags = OracleFlags(
        bounds_independence=True,
        submultiplicative=True,
        clique_value_one=theta.flags.clique_value_one and base.flags.clique_value_one,
    )
    provenance = {"submultiplicative": "weighted geometric means of submultiplicative bounds on alpha"}
    return BoundOracle(f"{theta.name}^{a}*{base.name}^{1 - a}", evaluator, flags, provenance)


# subset families --------------------------------------------------------


@dataclass(frozen=True)
class SubsetFamily:
    masks: tuple[int, ...]
    n: int

    def __post_init__(self):
        for m in self.masks:
            if m <= 0 or m >> self.n:
                raise ValueError(f"invalid subset mask {m:#x} for n={self.n}")

    @classmethod
    def of(cls, sets: Iterable[VertexSet | Iterable[int] | int], n: int) -> "SubsetFamily":
        out: list[int] = []
        seen = set()
        for s in sets:
            m = as_mask(s, n)
            if m not in seen:
                seen.add(m)
                out.append(m)
        return cls(tuple(out), n)

    @classmethod
    def maximal_cliques(cls, g: Graph) -> "SubsetFamily":
        return cls.of((c.mask for c in comb.maximal_cliques(g)), g.n)

    @classmethod
    def all_subsets(cls, n: int) -> "SubsetFamily":
        if n > MAX_FULL_VERTICES:
            raise ValueError(f"the full subset family is limited to n <= {MAX_FULL_VERTICES}")
        return cls(tuple(range(1, 1 << n)), n)

    @classmethod
    def default(cls, g: Graph, extra: Iterable = ()) -> "SubsetFamily":
        """Maximal cliques, the whole vertex set, and any extra sets."""
        sets = [c.mask for c in comb.maximal_cliques(g)] + [(1 << g.n) - 1]
        return cls.of(sets + [as_mask(s, g.n) for s in extra], g.n)

    def union(self, other: "SubsetFamily") -> "SubsetFamily":
        if other.n != self.n:
            raise ValueError("families index different vertex counts")
        return SubsetFamily.of(self.masks + other.masks, self.n)

    @property
    def covers(self) -> bool:
        acc = 0
        for m in self.masks:
            acc |= m
        return acc == (1 << self.n) - 1

    def __len__(self) -> int:
        return len(self.masks)

    def sets(self) -> list[VertexSet]:
        return [VertexSet(m, self.n) for m in self.masks]


# the f* LP -----------------------------------------------------------------


@dataclass(frozen=True)
class FStarResult:
    value: Fraction
    weights: tuple[Fraction, ...]  # w(x), feasible for the restricted primal
    cover: dict[int, Fraction]  # q(S) on its support, keyed by mask
    values: dict[int, Fraction]  # f(G_S) for every constraint kept
    claims: tuple[str, ...]
    oracle: str
    n: int
    certificate: LpCertificate = field(repr=False)
    problem: LpProblem = field(repr=False)
    pruned: int = 0
    independent_witness: VertexSet | None = None

    @property
    def bounds_theta(self) -> bool:
        return THETA_BOUND in self.claims

    @property
    def bounds_broadcast(self) -> bool:
        return BROADCAST_BOUND in self.claims

    def cover_sets(self) -> list[tuple[VertexSet, Fraction]]:
        return [(VertexSet(m, self.n), q) for m, q in sorted(self.cover.items())]


def _prune_dominated(masks: Sequence[int], vals: Sequence[Fraction], n: int) -> list[int]:
    """Indices of constraints not implied by a strict superset with value <=."""
    if len(masks) == (1 << n) - 1 and n <= MAX_FULL_VERTICES:
        # full family: superset-minimum transform in O(n 2^n)
        best = [None] * (1 << n)
        for m, v in zip(masks, vals):
            best[m] = v
        for bit in range(n):
            for m in range((1 << n) - 1, 0, -1):
                if not m >> bit & 1:
                    sup = best[m | 1 << bit]
                    if sup is not None and (best[m] is None or sup < best[m]):
                        best[m] = sup
        keep = []
        for k, (m, v) in enumerate(zip(masks, vals)):
            dominated = False
            for bit in range(n):
                if not m >> bit & 1:
                    sup = best[m | 1 << bit]
                    if sup is not None and sup <= v:
                        dominated = True
                        break
            if not dominated:
                keep.append(k)
        return keep
    keep = []
    for k, (m, v) in enumerate(zip(masks, vals)):
        if not any(m2 != m and m2 & m == m and v2 <= v for m2, v2 in zip(masks, vals)):
            keep.append(k)
    return keep


def _claims(flags: OracleFlags) -> tuple[str, ...]:
    out = []
    if flags.licenses_theta:
        out.append(THETA_BOUND)
    if flags.bounds_broadcast:
        out.append(BROADCAST_BOUND)
    return tuple(out) or (VALUE_ONLY,)


def fstar(g: Graph, f: BoundOracle, family: SubsetFamily, prune: bool = True) -> FStarResult:
    """Exact optimum of the f* LP restricted to ``family``.

    Restricting the family drops primal constraints, so the value is an
    upper bound on the full f*(g); the dual cover certifies it directly.
    """
    if family.n != g.n:
        raise ValueError("family indexes a different vertex count")
    if not family.covers:
        raise ValueError("family does not cover every vertex; the LP would be unbounded")
    masks = list(family.masks)
    vals = [f.evaluate(g, m) for m in masks]
    pruned = 0
    if prune:
        keep = _prune_dominated(masks, vals, g.n)
        pruned = len(masks) - len(keep)
        masks = [masks[k] for k in keep]
        vals = [vals[k] for k in keep]
    rows = [([1 if m >> x & 1 else 0 for m in masks], GE, 1) for x in range(g.n)]
    problem = LpProblem.build(vals, rows, maximize=False)
    cert = solve(problem)
    if cert.status != "optimal":
        raise RuntimeError(f"cover LP ended with status {cert.status}")
    cover = {m: q for m, q in zip(masks, cert.primal) if q}
    result = FStarResult(
        value=cert.value,
        weights=tuple(cert.dual),
        cover=cover,
        values=dict(zip(masks, vals)),
        claims=_claims(f.flags),
        oracle=f.name,
        n=g.n,
        certificate=cert,
        problem=problem,
        pruned=pruned,
    )
    if result.bounds_theta and g.n <= comb.MAX_EXACT_VERTICES:
        witness = _counting_check(g, result)
        result = FStarResult(**{**result.__dict__, "independent_witness": witness})
    return result


def _counting_check(g: Graph, r: FStarResult) -> VertexSet:
    """Re-derive alpha(g) <= value from the cover and a maximum independent set."""
    gamma = comb.maximum_independent_set(g)
    total = Fraction(0)
    for m, q in r.cover.items():
        hits = bin(m & gamma.mask).count("1")
        if r.values[m] < hits:
            raise RuntimeError("oracle value below the independent set it contains")
        total += q * hits
    for x in gamma:
        if sum((q for m, q in r.cover.items() if m >> x & 1), Fraction(0)) < 1:
            raise RuntimeError(f"cover misses vertex {x}")
    if not len(gamma) <= total <= r.value:
        raise RuntimeError("counting argument failed")
    return gamma


def fstar_full(g: Graph, f: BoundOracle, prune: bool = True) -> FStarResult:
    """The true f*(g) over all 2^n - 1 nonempty subsets (n <= 16)."""
    if g.n > MAX_FULL_VERTICES:
        raise ValueError(f"fstar_full is limited to n <= {MAX_FULL_VERTICES}, got {g.n}")
    return fstar(g, f, SubsetFamily.all_subsets(g.n), prune=prune)


# combinators ---------------------------------------------------------------


@dataclass(frozen=True)
class UnionBound:
    value: Fraction
    left: Fraction  # minrk(G) + alpha_f(H)
    right: Fraction  # alpha_f(G) + minrk(H)
    terms: dict[str, str]


def union_bound_corollary(
    g: Graph, h: Graph, minrank_g: FittingMatrix, minrank_h: FittingMatrix
) -> UnionBound:
    """``min(minrk(G) + alpha_f(H), alpha_f(G) + minrk(H))``, a bound on Theta(G+H).

    The minrank terms come from the supplied fitting matrices, which must
    fit their graphs.
    """
    for name, graph, b in (("G", g, minrank_g), ("H", h, minrank_h)):
        if b is None:
            raise ValueError(f"missing minrank certificate for {name}")
        if b.graph.rows != graph.rows or not check_fits(b):
            raise ValueError(f"minrank certificate for {name} does not fit")
    rg, rh = Fraction(minrank_g.rank()), Fraction(minrank_h.rank())
    ag, ah = comb.fractional_independence(g)[0], comb.fractional_independence(h)[0]
    left, right = rg + ah, ag + rh
    terms = {
        "minrk(G)": f"{rg} (rank of fitting matrix over {minrank_g.field})",
        "minrk(H)": f"{rh} (rank of fitting matrix over {minrank_h.field})",
        "alpha_f(G)": f"{ag} (exact LP)",
        "alpha_f(H)": f"{ah} (exact LP)",
    }
    return UnionBound(min(left, right), left, right, terms)


def optimize_geometric_mean(components: Sequence[tuple], tolerance: float = 1e-9) -> tuple[float, float]:
    """Minimise ``sum mult * theta^a * base^(1-a)`` over ``a`` in [0, 1].

    Components are ``(theta, base, mult)``, optionally preceded by the
    graph they describe. Each term is an exponential in ``a``, so the sum
    is convex and ternary search converges to the minimiser.
    """
    comps = [(float(c[-3]), float(c[-2]), float(c[-1])) for c in components]
    if any(t <= 0 or b <= 0 for t, b, _ in comps):
        raise ValueError("component values must be positive")

    def objective(a: float) -> float:
        return sum(m * t**a * b ** (1 - a) for t, b, m in comps)

    lo, hi = 0.0, 1.0
    while hi - lo > tolerance:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if objective(m1) <= objective(m2):
            hi = m2
        else:
            lo = m1
    a = (lo + hi) / 2
    return a, objective(a)


def check_additivity(g: Graph, h: Graph, f: BoundOracle) -> bool:
    """Whether f*(G+H) = f*(G) + f*(H) holds exactly for a superadditive f."""
    if not f.flags.superadditive:
        raise ValueError(f"oracle {f.name} is not flagged superadditive")
    if g.n + h.n > MAX_FULL_VERTICES:
        raise ValueError("graphs too large for the full f* computation")
    both = fstar_full(disjoint_union(g, h), f).value
    return both == fstar_full(g, f).value + fstar_full(h, f).value


# text formats -------------------------------------------------------------------


def _parse_label_set(tok: str, g: Graph) -> int:
    body = tok.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected '{{...}}', got {tok!r}")
    names = [x.strip() for x in body[1:-1].split(",") if x.strip()]
    if not names:
        raise ValueError("empty vertex set")
    return as_mask([g.index_of(x) for x in names], g.n)


def _format_label_set(mask: int, g: Graph) -> str:
    return "{" + ",".join(g.label(v) for v in _bits(mask)) + "}"


def parse_oracle_table(text: str, graph: Graph, base: Path | None = None) -> tuple[FieldSpec, dict]:
    """Table of certified minrank values.

    A ``field: F`` line, then entries ``S:{labels} = p/q  # ref`` where
    ``ref`` is ``exact-search`` or a matrix file (relative to ``base``)
    fitting the induced subgraph in increasing vertex order.
    """
    fld = None
    table: dict[int, tuple[Fraction, object]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, ref = raw.partition("#")
        body, ref = body.strip(), ref.strip()
        if not body:
            continue
        if body.startswith("field:"):
            fld = FieldSpec.parse(body[len("field:") :].strip())
            continue
        if fld is None:
            raise ValueError("oracle table needs a 'field: F' line before its entries")
        lhs, eq, rhs = body.partition("=")
        if not eq or not lhs.strip().startswith("S:"):
            raise ValueError(f"line {lineno}: expected 'S:{{...}} = p/q  # ref'")
        mask = _parse_label_set(lhs.strip()[2:], graph)
        value = Fraction(rhs.strip())
        if not ref:
            raise ValueError(f"line {lineno}: entry has no certificate reference")
        if ref == "exact-search":
            cert: object = "exact-search"
        else:
            path = Path(ref) if base is None else base / ref
            cert = parse_matrix(path.read_text(encoding="utf-8"), induced_subgraph(graph, mask))
        table[mask] = (value, cert)
    if fld is None:
        raise ValueError("oracle table has no 'field: F' line")
    return fld, table


def read_oracle_table(path: str | Path, graph: Graph) -> tuple[FieldSpec, dict]:
    path = Path(path)
    return parse_oracle_table(path.read_text(encoding="utf-8"), graph, path.parent)


def parse_family(text: str, graph: Graph) -> SubsetFamily:
    """One ``{labels}`` set per line."""
    sets = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            sets.append(_parse_label_set(ln, graph))
    return SubsetFamily.of(sets, graph.n)


def read_family(path: str | Path, graph: Graph) -> SubsetFamily:
    return parse_family(Path(path).read_text(encoding="utf-8"), graph)


def format_family(family: SubsetFamily, graph: Graph) -> str:
    return "".join(_format_label_set(m, graph) + "\n" for m in family.masks)
