"""Broadcast-rate bounds and concatenated index-coding scheme plans.

The broadcast rate itself is never computed. Reports hold the chain
alpha <= beta <= minrk_F <= clique cover (finite F), plus alpha_f and any
f* values whose oracles bound beta, each entry with its licence and
certificate reference.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import combinatorics as comb
from .capacity import (
    BoundOracle,
    FStarResult,
    SubsetFamily,
    fstar,
    make_minrank_oracle,
)
from .graph import Graph, VertexSet, cycle, disjoint_union, schlafli_complement
from .minrank import (
    DeletionScript,
    FieldSpec,
    FittingMatrix,
    block_diagonal,
    check_fits,
    clique_partition_matrix,
    minrank_search,
    replay_deletion_proof,
    _search_allowed,
)
from .theta import MAX_THETA_VERTICES, lovasz_theta

__all__ = [
    "SCHEMA_VERSION",
    "SchemePlan",
    "ReportEntry",
    "BoundReport",
    "scheme_from_cover",
    "broadcast_report",
    "bukh_cox_witness",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SchemePlan:
    """Use ``y_S`` copies of an optimal code for each ``G_S`` on t-bit blocks."""

    t: int
    subsets: tuple[tuple[VertexSet, int], ...]  # (S, y_S)
    rates: tuple[Fraction, ...]  # f(G_S), aligned with subsets
    n: int

    @property
    def p(self) -> int:
        return sum(y for _, y in self.subsets)

    @property
    def total_rate(self) -> Fraction:
        return sum((y * r for (_, y), r in zip(self.subsets, self.rates)), Fraction(0)) / self.t

    def coverage(self) -> list[int]:
        """How many of the p codes each vertex takes part in."""
        out = [0] * self.n
        for s, y in self.subsets:
            for v in s:
                out[v] += y
        return out

    @property
    def covers(self) -> bool:
        return all(c >= self.t for c in self.coverage())


def scheme_from_cover(g: Graph, result: FStarResult) -> SchemePlan:
    """Scale the dual cover by the lcm of its denominators."""
    if result.n != g.n:
        raise ValueError("result belongs to a different graph")
    support = sorted(result.cover.items())
    t = 1
    for _, q in support:
        t = t * q.denominator // math.gcd(t, q.denominator)
    subsets = tuple((VertexSet(m, g.n), int(q * t)) for m, q in support)
    rates = tuple(result.values[m] for m, _ in support)
    plan = SchemePlan(t, subsets, rates, g.n)
    if not plan.covers:
        raise RuntimeError("scaled cover misses a vertex")
    if plan.total_rate != result.value:
        raise RuntimeError(f"scheme rate {plan.total_rate} differs from the LP value {result.value}")
    return plan


# reports --------------------------------------------------------------------


@dataclass(frozen=True)
class ReportEntry:
    """One invariant. ``lower``/``upper`` may coincide (exact values).

    ``bounds`` lists which capacities the upper end bounds ("theta" for
    Shannon capacity, "beta" for the broadcast rate), ``licence`` the
    statement that allows it, ``certified`` whether this package verified
    the value rather than citing it.
    """

    name: str
    lower: Fraction | float | None
    upper: Fraction | float | None
    bounds: tuple[str, ...] = ()
    licence: str = ""
    certificate: str = ""
    certified: bool = True
    note: str = ""

    @property
    def exact(self) -> bool:
        return self.lower is not None and self.lower == self.upper

    def to_json(self) -> dict[str, Any]:
        def enc(x):
            if x is None:
                return None
            if isinstance(x, Fraction):
                return str(x)
            return float(x)

        return {
            "name": self.name,
            "lower": enc(self.lower),
            "upper": enc(self.upper),
            "bounds": list(self.bounds),
            "licence": self.licence,
            "certificate": self.certificate,
            "certified": self.certified,
            "note": self.note,
        }


@dataclass
class BoundReport:
    graph_id: str
    n: int
    entries: list[ReportEntry] = field(default_factory=list)
    absent: dict[str, str] = field(default_factory=dict)  # name -> reason

    def get(self, name: str) -> ReportEntry | None:
        for e in self.entries:
            if e.name == name:
                return e
        return None

    def __getitem__(self, name: str) -> ReportEntry:
        e = self.get(name)
        if e is None:
            raise KeyError(name)
        return e

    def best_upper(self, target: str) -> Fraction | float | None:
        ups = [e.upper for e in self.entries if target in e.bounds and e.certified and e.upper is not None]
        return min(ups) if ups else None

    def interval(self, target: str) -> tuple[Fraction | float | None, Fraction | float | None]:
        """[alpha, best certified upper bound] for Theta or beta."""
        alpha = self.get("alpha")
        return (alpha.lower if alpha else None), self.best_upper(target)

    def chain_violations(self) -> list[str]:
        out = []
        alpha = self.get("alpha")
        cover = self.get("clique_cover")
        for e in self.entries:
            if not e.bounds or e.upper is None:
                continue
            if alpha is not None and e.upper < alpha.lower:
                out.append(f"{e.name} upper {e.upper} < alpha {alpha.lower}")
            if "beta" in e.bounds and cover is not None and e.upper > cover.upper:
                out.append(f"{e.name} upper {e.upper} > clique cover {cover.upper}")
        for e in self.entries:
            if e.lower is not None and e.upper is not None and e.lower > e.upper:
                out.append(f"{e.name} interval is empty")
        return out

    def to_json(self) -> dict[str, Any]:
        lo_t, hi_t = self.interval("theta")
        lo_b, hi_b = self.interval("beta")

        def enc(x):
            return None if x is None else (str(x) if isinstance(x, Fraction) else float(x))

        return {
            "schema_version": SCHEMA_VERSION,
            "graph": self.graph_id,
            "n": self.n,
            "entries": [e.to_json() for e in self.entries],
            "absent": dict(self.absent),
            "capacity_interval": [enc(lo_t), enc(hi_t)],
            "broadcast_interval": [enc(lo_b), enc(hi_b)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def lines(self) -> list[str]:
        def fmt(x):
            return "-" if x is None else (str(x) if isinstance(x, Fraction) else f"{x:.9g}")

        out = [f"graph {self.graph_id} (n={self.n})"]
        for e in self.entries:
            val = fmt(e.upper) if e.exact else f"[{fmt(e.lower)}, {fmt(e.upper)}]"
            tags = ",".join(e.bounds) or "-"
            cited = "" if e.certified else " (cited, not certified)"
            out.append(f"  {e.name:<28} {val:<32} bounds={tags}{cited}")
        for name, why in self.absent.items():
            out.append(f"  {name:<28} absent: {why}")
        return out


_ALPHA_LICENCE = "alpha <= Theta and alpha <= beta"
_COVER_LICENCE = "beta <= clique cover number (and hence Theta)"
_ALPHA_F_LICENCE = "Theta <= alpha_f and beta <= alpha_f"
_THETA_LICENCE = "Lovász: Theta <= theta"


def _minrank_entry(
    g: Graph,
    fld: FieldSpec,
    alpha: int | None,
    cover: list[VertexSet] | None,
    matrices: Sequence[FittingMatrix],
    gap_proved: bool,
) -> ReportEntry | str:
    """Interval for minrk over ``fld``, or the reason it is absent."""
    uppers: list[tuple[int, str]] = []
    for b in matrices:
        if b.field == fld and b.graph.rows == g.rows and check_fits(b):
            uppers.append((b.rank(), "supplied fitting matrix"))
    if cover is not None:
        uppers.append((clique_partition_matrix(g, cover, fld).rank(), "clique partition matrix"))
    lower = alpha
    lower_why = "alpha"
    if _search_allowed(g, fld):
        exact, _ = minrank_search(g, fld)
        uppers.append((exact, "exhaustive search"))
        lower, lower_why = exact, "exhaustive search"
    elif gap_proved and alpha is not None:
        lower, lower_why = alpha + 1, "edge-deletion proof"
    if not uppers:
        return "no fitting matrix available (graph too large for clique covers)"
    upper, how = min(uppers)
    bounds = ("theta", "beta") if not fld.is_rational else ("theta",)
    licence = "Theta <= minrk_F" + ("; beta <= minrk_F over finite fields" if not fld.is_rational else "")
    return ReportEntry(
        f"minrk[{fld}]",
        None if lower is None else Fraction(lower),
        Fraction(upper),
        bounds,
        licence,
        f"upper: {how}; lower: {lower_why}",
    )


def broadcast_report(
    g: Graph,
    fields: Sequence[FieldSpec] = (),
    oracles: Sequence[BoundOracle] = (),
    families: Sequence[SubsetFamily] = (),
    graph_id: str = "G",
    tolerance: float = 1e-7,
    matrices: Sequence[FittingMatrix] = (),
    deletion_script: DeletionScript | None = None,
    workers: int = 4,
) -> BoundReport:
    """Everything computable about alpha <= {Theta, beta} <= ... for ``g``.

    Every (oracle, family) pair becomes an f* entry; entries over size
    limits are listed as absent rather than estimated.
    """
    rep = BoundReport(graph_id, g.n)

    def job_alpha():
        if g.n > comb.MAX_EXACT_VERTICES:
            return "graph too large for exact independence search"
        return comb.maximum_independent_set(g)

    def job_alpha_f():
        if g.n > comb.MAX_EXACT_VERTICES:
            return "graph too large for clique enumeration"
        return comb.fractional_independence(g)[0]

    def job_cover():
        if g.n > comb.MAX_COVER_VERTICES:
            return "graph too large for exact clique cover"
        return comb.minimum_clique_cover(g)

    def job_theta():
        if g.n > MAX_THETA_VERTICES:
            return "graph too large for the theta SDP"
        return lovasz_theta(g, tolerance)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        fa, ff, fc, ft = (pool.submit(j) for j in (job_alpha, job_alpha_f, job_cover, job_theta))
        witness, alpha_f, cover, theta = fa.result(), ff.result(), fc.result(), ft.result()

    alpha = None
    if isinstance(witness, str):
        rep.absent["alpha"] = witness
    else:
        alpha = len(witness)
        rep.entries.append(ReportEntry("alpha", Fraction(alpha), Fraction(alpha), (), _ALPHA_LICENCE, f"independent set {witness}"))
    if isinstance(alpha_f, str):
        rep.absent["alpha_f"] = alpha_f
    else:
        rep.entries.append(ReportEntry("alpha_f", alpha_f, alpha_f, ("theta", "beta"), _ALPHA_F_LICENCE, "exact LP with dual clique cover"))
    if isinstance(cover, str):
        rep.absent["clique_cover"] = cover
        cover = None
    else:
        k = Fraction(len(cover))
        rep.entries.append(ReportEntry("clique_cover", k, k, ("theta", "beta"), _COVER_LICENCE, "explicit cover " + " ".join(map(str, cover))))
    if isinstance(theta, str):
        rep.absent["theta"] = theta
    else:
        rep.entries.append(
            ReportEntry("theta", theta.lower, theta.upper, ("theta",), _THETA_LICENCE, "primal/dual SDP certificates", note=f"tolerance {tolerance:g}")
        )

    gap = False
    if deletion_script is not None:
        outcome = replay_deletion_proof(g, deletion_script)
        gap = outcome.proves_gap
        rep.entries.append(
            ReportEntry(
                "deletion_proof",
                Fraction(outcome.alpha_residual),
                Fraction(outcome.alpha_residual),
                (),
                "minrk_F(G) = alpha(G) iff minrk_F(H) = alpha(G) for each deletion step",
                "; ".join(outcome.trail),
                note=outcome.verdict,
            )
        )
    for fld in fields:
        e = _minrank_entry(g, fld, alpha, cover, matrices, gap)
        if isinstance(e, str):
            rep.absent[f"minrk[{fld}]"] = e
        else:
            rep.entries.append(e)

    for oracle in oracles:
        for k, fam in enumerate(families):
            name = f"fstar[{oracle.name}; family {k}]"
            try:
                r = fstar(g, oracle, fam)
            except ValueError as exc:
                rep.absent[name] = str(exc)
                continue
            bounds = tuple(t for t, ok in (("theta", r.bounds_theta), ("beta", r.bounds_broadcast)) if ok)
            cover_txt = " ".join(f"{{{','.join(g.label(v) for v in s)}}}:{q}" for s, q in r.cover_sets())
            rep.entries.append(ReportEntry(name, None, r.value, bounds, "; ".join(r.claims), f"dual cover {cover_txt}"))
    return rep


# the theta-vs-minrank witness -------------------------------------------------


def bukh_cox_witness(tolerance: float = 1e-7, copies: int = 7) -> BoundReport:
    """Schläfli complement plus seven 5-cycles: theta < minrk, yet minrk* < theta.

    theta is computed both by additivity and by one SDP on the whole
    union. minrk <= 28 is certified by a block fitting matrix; the
    matching lower bound is cited, not certified.
    """
    s = schlafli_complement()
    c5 = cycle(5)
    g = s
    for _ in range(copies):
        g = disjoint_union(g, c5)
    f11 = FieldSpec.prime(11)
    rep = BoundReport(f"schlafli_complement+{copies}C5", g.n)

    ts, tc = lovasz_theta(s, tolerance), lovasz_theta(c5, tolerance)
    add_lo, add_hi = ts.lower + copies * tc.lower, ts.upper + copies * tc.upper
    rep.entries.append(ReportEntry("theta_additive", add_lo, add_hi, ("theta",), "theta is additive over disjoint unions", "component SDPs"))
    direct = lovasz_theta(g, tolerance)
    rep.entries.append(ReportEntry("theta_direct", direct.lower, direct.upper, ("theta",), _THETA_LICENCE, f"{g.n}-vertex SDP"))
    if direct.upper < add_lo - 2 * tolerance or add_hi < direct.lower - 2 * tolerance:
        raise RuntimeError("direct and additive theta intervals disagree")

    import numpy as np

    a_minus_i = (s.adjacency.astype(int) - np.eye(s.n, dtype=int)).tolist()
    blocks = [FittingMatrix.of(a_minus_i, f11, s)]
    c5_cover = comb.minimum_clique_cover(c5)
    blocks += [clique_partition_matrix(c5, c5_cover, f11)] * copies
    big = block_diagonal(blocks, g)
    if not check_fits(big):
        raise RuntimeError("block fitting matrix does not fit")
    upper = big.rank()
    alpha = comb.independence_number(s) + copies * comb.independence_number(c5)
    rep.entries.append(
        ReportEntry(
            f"minrk[{f11}]",
            Fraction(alpha),
            Fraction(upper),
            ("theta", "beta"),
            "Theta <= minrk_F; beta <= minrk_F over finite fields",
            "upper: block matrix of A - I and clique partitions of each C5; lower: alpha",
        )
    )
    rep.entries.append(
        ReportEntry(
            "minrk (cited)",
            Fraction(7 + 3 * copies),
            Fraction(7 + 3 * copies),
            (),
            "additivity of minrk over components, each component exact",
            "",
            certified=False,
            note="lower bound cited, not independently certified",
        )
    )

    # minrk*: one family of the Schläfli core and the maximal cliques of each C5
    table = {s.vertices: (7, blocks[0])}
    core_oracle = make_minrank_oracle(f11, table, s)
    core_value = fstar(s, core_oracle, SubsetFamily.default(s)).value
    cyc = fstar(c5, make_minrank_oracle(f11), SubsetFamily.maximal_cliques(c5)).value
    bound = core_value + copies * cyc
    rep.entries.append(
        ReportEntry(
            f"minrk*[{f11}]",
            None,
            bound,
            ("theta", "beta"),
            "f* is subadditive over disjoint unions; beta <= minrk*_F over finite fields",
            f"f*(core) = {core_value}, f*(C5) = {cyc} over cliques",
        )
    )
    theta_lo = min(direct.lower, add_lo)
    if not direct.upper < upper:
        raise RuntimeError("theta is not below the minrank certificate")
    if not bound < Fraction(theta_lo):
        raise RuntimeError("minrk* bound is not below theta")
    return rep
