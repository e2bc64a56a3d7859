"""Replayable reference computations with expected values.

Each case recomputes a reference value from scratch and compares it
exactly (rationals) or within a tolerance (floats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import combinatorics as comb
from .cache import ResultCache, default_cache, descriptor, theta_interval
from .capacity import (
    SubsetFamily,
    cycle_minrank_table,
    fstar,
    fstar_full,
    make_minrank_oracle,
    make_theta_oracle,
    optimize_geometric_mean,
)
from .graph import cycle, random_graph, schlafli_complement
from .minrank import FieldSpec, extend_with_identity, minrank_upper, rank, replay_deletion_proof

__all__ = ["ReplayCase", "ReplayOutcome", "CASES", "run_case", "run_all"]


@dataclass(frozen=True)
class ReplayOutcome:
    case: str
    expected: str
    actual: str
    ok: bool
    provenance: str
    detail: str = ""

    def line(self) -> str:
        status = "ok" if self.ok else "MISMATCH"
        out = f"{self.case}: {status} expected {self.expected} got {self.actual} [{self.provenance}]"
        return out + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class ReplayCase:
    id: str
    description: str
    mode: str  # "exact" or "interval"
    provenance: str
    run: Callable[..., ReplayOutcome]


def _exact(case: str, provenance: str, expected, actual, detail: str = "") -> ReplayOutcome:
    return ReplayOutcome(case, str(expected), str(actual), expected == actual, provenance, detail)


def _close(case: str, provenance: str, expected: float, actual: float, tol: float, detail: str = "") -> ReplayOutcome:
    ok = abs(expected - actual) <= tol
    return ReplayOutcome(case, f"{expected:.6f} ± {tol:g}", f"{actual:.6f}", ok, provenance, detail)


def _combine(case: str, provenance: str, parts: list[ReplayOutcome], actual: str) -> ReplayOutcome:
    bad = [p for p in parts if not p.ok]
    detail = "; ".join(f"{p.detail or p.case}: expected {p.expected} got {p.actual}" for p in bad)
    expected = ", ".join(p.expected for p in parts)
    return ReplayOutcome(case, expected, actual, not bad, provenance, detail)


def _cycles(tolerance: float, seed: int, cache: ResultCache | None) -> ReplayOutcome:
    q = FieldSpec.rationals()
    parts, shown = [], []
    for n in (5, 7, 9, 11):
        af = comb.fractional_independence(cycle(n))[0]
        parts.append(_exact("alpha_f", "exact LP", Fraction(n, 2), af, f"alpha_f(C{n})"))
        shown.append(str(af))
    for n in (5, 7, 9):
        oracle = make_minrank_oracle(q, cycle_minrank_table(n, q), cycle(n))
        v = fstar_full(cycle(n), oracle).value
        parts.append(_exact("minrk*", "exact LP", Fraction(n, 2), v, f"minrk*_Q(C{n})"))
        shown.append(str(v))
    return _combine("cycles-nhalf", "reference: alpha_f(C_n) = minrk*(C_n) = n/2", parts, " ".join(shown))


def _schlafli(tolerance: float, seed: int, cache: ResultCache | None) -> ReplayOutcome:
    s = schlafli_complement()
    m = s.adjacency.astype(int) - np.eye(s.n, dtype=int)
    parts = [
        _exact("rank", "", 7, rank(m, FieldSpec.rationals()), "rank over Q"),
        _exact("rank", "", 7, rank(m, FieldSpec.prime(11)), "rank over F11"),
    ]
    return _combine("schlafli-rank", "reference: rank(A - I) = 7", parts, " ".join(p.actual for p in parts))


def _fixture_719(tolerance: float, seed: int, cache: ResultCache | None) -> ReplayOutcome:
    from .fixtures import load_fixture_oracle_table, load_modified_schlafli
    from .fixtures.constraints import CORE

    g = load_modified_schlafli()  # validated at load
    fld, table = load_fixture_oracle_table()
    oracle = make_minrank_oracle(fld, table, g)
    core = [g.index_of(x) for x in CORE]
    family = SubsetFamily.maximal_cliques(g).union(SubsetFamily.of([core], g.n))
    r = fstar(g, oracle, family)
    detail = "" if r.value == Fraction(71, 9) else "no validated labelling reproduces the reference LP value"
    return _exact("fixture-719", "reference LP optimum 71/9", Fraction(71, 9), r.value, detail)


def _geomean(tolerance: float, seed: int, cache: ResultCache | None) -> ReplayOutcome:
    a, value = optimize_geometric_mean([(9, 7, 1), (math.sqrt(5), 2.5, 7)])
    parts = [
        _close("a*", "", 0.287291, a, 1e-3, "argmin"),
        _close("value", "", 24.4721, value, 1e-3, "minimum"),
    ]
    return _combine("geomean-244721", "reference: a = 0.287291 gives 24.4721", parts, f"a={a:.6f} value={value:.6f}")


def _bukh_cox(tolerance: float, seed: int, cache: ResultCache | None) -> ReplayOutcome:
    from .index_coding import bukh_cox_witness

    rep = bukh_cox_witness(tolerance)
    target = 9 + 7 * math.sqrt(5)
    th = rep["theta_direct"]
    ad = rep["theta_additive"]
    parts = [
        _close("theta", "", target, (th.lower + th.upper) / 2, 1e-4, "direct SDP"),
        _close("theta", "", target, (ad.lower + ad.upper) / 2, 1e-4, "additivity"),
        _exact("minrk", "", Fraction(28), rep["minrk[11]"].upper, "block matrix rank"),
        _exact("minrk*", "", Fraction(49, 2), rep["minrk*[11]"].upper, "minrk*_F11 bound"),
    ]
    actual = f"theta={(th.lower + th.upper) / 2:.6f} minrk<={rep['minrk[11]'].upper} minrk*<={rep['minrk*[11]'].upper}"
    return _combine("bukhcox-245", "reference: theta = 9 + 7 sqrt 5, minrk = 28, minrk* <= 24.5", parts, actual)


def _appendix(tolerance: float, seed: int, cache: ResultCache | None) -> ReplayOutcome:
    from .fixtures import load_core_minrank_matrix, load_deletion_script, load_modified_schlafli
    from .fixtures.constraints import CORE, RESIDUAL_INDEPENDENT

    g = load_modified_schlafli()
    out = replay_deletion_proof(g, load_deletion_script())
    b = extend_with_identity(load_core_minrank_matrix(), g, [g.index_of(x) for x in CORE])
    upper = minrank_upper(g, b)
    parts = [
        _exact("alpha", "", 7, out.alpha, "alpha(G)"),
        _exact("alpha", "", 8, out.alpha_residual, "alpha(H)"),
        _exact("witness", "", sorted(RESIDUAL_INDEPENDENT, key=int), sorted(out.residual_witness, key=int), "residual witness"),
        _exact("upper", "", 8, upper, "apex extension rank"),
        _exact("verdict", "", "minrk > alpha", out.verdict, "deletion proof"),
    ]
    lower = out.alpha + 1 if out.proves_gap else out.alpha
    return _combine("appendix-minrk8", "reference: minrk(G) = 8", parts, f"{lower} <= minrk <= {upper}")


def _theta_fixedpoint(tolerance: float, seed: int, cache: ResultCache | None, count: int = 3, n: int = 7) -> ReplayOutcome:
    rng = np.random.default_rng(seed)
    oracle = make_theta_oracle(tolerance, cache)
    parts, worst = [], 0.0
    for k in range(count):
        g = random_graph(n, 0.5, rng)
        lo, hi = theta_interval(g, tolerance, cache)
        if cache is None:
            v = float(fstar_full(g, oracle).value)
        else:
            desc = descriptor("fstar_full", g, oracle=oracle.name)
            v = float(Fraction(cache.get_or_compute(desc, lambda: str(fstar_full(g, oracle).value))))
        worst = max(worst, abs(v - hi))
        parts.append(_close("theta*", "", hi, v, 1e-3, f"graph {k}"))
    return _combine("theta-fixedpoint", "reference: theta* = theta", parts, f"max deviation {worst:.2e}")


CASES: dict[str, ReplayCase] = {
    c.id: c
    for c in (
        ReplayCase("cycles-nhalf", "alpha_f and minrk*_Q of odd cycles", "exact", "n/2", _cycles),
        ReplayCase("schlafli-rank", "rank of A - I for the 27-lines graph", "exact", "7", _schlafli),
        ReplayCase("fixture-719", "f* LP on the modified Schläfli fixture", "exact", "71/9", _fixture_719),
        ReplayCase("geomean-244721", "geometric mean of theta and minrk*", "interval", "24.4721", _geomean),
        ReplayCase("bukhcox-245", "theta < minrk but minrk* < theta", "interval", "24.5", _bukh_cox),
        ReplayCase("appendix-minrk8", "edge-deletion proof of minrk = 8", "exact", "8", _appendix),
        ReplayCase("theta-fixedpoint", "f* of theta equals theta", "interval", "theta", _theta_fixedpoint),
    )
}


def run_case(case_id: str, tolerance: float = 1e-7, seed: int = 0, cache: ResultCache | None = None) -> ReplayOutcome:
    try:
        case = CASES[case_id]
    except KeyError:
        raise KeyError(f"unknown replay case {case_id!r}; known: {', '.join(CASES)}") from None
    if cache is None:
        cache = default_cache()
    return case.run(tolerance, seed, cache)


def run_all(tolerance: float = 1e-7, seed: int = 0, cache: ResultCache | None = None) -> list[ReplayOutcome]:
    return [run_case(c, tolerance, seed, cache) for c in CASES]
