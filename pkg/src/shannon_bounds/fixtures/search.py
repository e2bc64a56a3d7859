"""Rebuild the modified Schläfli fixture from its textual constraints.

The core must be a copy of the 27-lines graph. Its vertices are matched
against the figure labels by backtracking over the pairs whose adjacency
the constraints pin down. Candidates are enumerated in a fixed order and
the first one that also reproduces the quoted LP value 71/9 is kept.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .. import combinatorics as comb
from ..graph import Graph, schlafli_complement
from . import constraints as fx

__all__ = ["regenerate", "pinned_pairs", "labelings", "graph_from_labeling", "clique_lp_value", "find_fixture"]


def pinned_pairs() -> dict[frozenset[int], bool]:
    """Core pairs (figure labels 1..27) whose adjacency the constraints fix."""
    pairs: dict[frozenset[int], bool] = {}

    def pin(a: int, b: int, adjacent: bool) -> None:
        key = frozenset((a, b))
        if pairs.get(key, adjacent) != adjacent:
            raise AssertionError(f"contradictory constraints on {a},{b}")
        pairs[key] = adjacent

    n6 = {int(x) for x in fx.NEIGHBORS_6}
    n17 = {int(x) for x in fx.NEIGHBORS_17_WITHOUT_6} | {6}
    for v in range(1, 28):
        if v != 6:
            pin(6, v, v in n6)
        if v != 17:
            pin(17, v, v in n17)
    core_i = [int(x) for x in fx.MAX_INDEPENDENT if x != fx.APEX]
    for a, b in itertools.combinations(core_i, 2):
        pin(a, b, False)
    for pivot, targets in ((6, fx.PIVOT_6_TARGETS), (17, fx.PIVOT_17_TARGETS)):
        j = [x for x in core_i if x in (n6 if pivot == 6 else n17)]
        for t in targets:
            for x in j:
                pin(int(t), x, False)
    deleted = {frozenset((int(a), int(b))) for a, b in fx.DELETED_EDGES}
    for a, b in itertools.combinations([int(x) for x in fx.RESIDUAL_INDEPENDENT], 2):
        if frozenset((a, b)) not in deleted:
            pin(a, b, False)
    return pairs


def labelings(limit: int | None = None) -> Iterator[dict[int, int]]:
    """Maps figure label -> 27-lines vertex index consistent with the pins."""
    base = schlafli_complement()
    pins = pinned_pairs()
    by_vertex: dict[int, list[tuple[int, bool]]] = {}
    for pair, adj in pins.items():
        a, b = tuple(pair)
        by_vertex.setdefault(a, []).append((b, adj))
        by_vertex.setdefault(b, []).append((a, adj))
    order = sorted(range(1, 28), key=lambda v: (-len(by_vertex.get(v, [])), v))
    assign: dict[int, int] = {}
    used = 0
    count = 0

    def bt(k: int) -> Iterator[dict[int, int]]:
        nonlocal used, count
        if k == len(order):
            count += 1
            yield dict(assign)
            return
        v = order[k]
        for x in range(27):
            if used >> x & 1:
                continue
            if all(base.adjacent(x, assign[b]) == adj for b, adj in by_vertex.get(v, []) if b in assign):
                assign[v] = x
                used |= 1 << x
                yield from bt(k + 1)
                del assign[v]
                used &= ~(1 << x)
            if limit is not None and count >= limit:
                return

    yield from bt(0)


def graph_from_labeling(labeling: dict[int, int]) -> Graph:
    base = schlafli_complement()
    edges = [
        (a - 1, b - 1)
        for a, b in itertools.combinations(range(1, 28), 2)
        if base.adjacent(labeling[a], labeling[b])
    ]
    apex = int(fx.APEX) - 1
    edges += [(apex, int(x) - 1) for x in fx.APEX_NEIGHBORS]
    return Graph.from_edges(28, edges, labels=[str(i) for i in range(1, 29)])


def clique_lp_value(g: Graph) -> Fraction:
    """max sum w s.t. w(K) <= 1 on maximal cliques and w(core) <= 7."""
    from ..rational_lp import LE, LpProblem, solve

    rows = [([1 if c.mask >> v & 1 else 0 for v in range(g.n)], LE, 1) for c in comb.maximal_cliques(g)]
    core = [0 if g.label(v) == fx.APEX else 1 for v in range(g.n)]
    rows.append((core, LE, fx.CORE_MINRANK))
    return solve(LpProblem.build([1] * g.n, rows)).value


def find_fixture(target: Fraction = Fraction(71, 9), limit: int = 200) -> tuple[Graph, dict[int, int]]:
    """First valid candidate whose clique LP equals ``target``."""
    from ..minrank import fixture_violations

    for labeling in labelings(limit):
        g = graph_from_labeling(labeling)
        if fixture_violations(g):
            continue
        if clique_lp_value(g) == target:
            return g, labeling
    raise LookupError(f"no candidate among the first {limit} reproduces {target}")


def deletion_order() -> list[tuple[str, str]]:
    """The listed deletions with (6, 17) moved last.

    Removing (6, 17) early would let alpha grow before the remaining
    steps, breaking their maximality hypothesis.
    """
    last = ("6", "17")
    return [e for e in fx.DELETED_EDGES if set(e) != set(last)] + [last]


def regenerate(directory: str | Path) -> Graph:
    """Recompute and write every shipped fixture file into ``directory``."""
    import numpy as np

    from ..graph import induced_subgraph, write_graph
    from ..minrank import DeletionScript, DeletionStep, FieldSpec, FittingMatrix, format_matrix, format_script

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    g, _ = find_fixture()
    write_graph(g, out / "modified_schlafli.g")
    steps = tuple(DeletionStep(fx.MAX_INDEPENDENT, u, w) for u, w in deletion_order())
    script = DeletionScript(steps, fx.RESIDUAL_INDEPENDENT)
    (out / "deletion_script.txt").write_text(format_script(script), encoding="utf-8")
    core = induced_subgraph(g, [g.index_of(x) for x in fx.CORE])
    a_minus_i = core.adjacency.astype(int) - np.eye(core.n, dtype=int)
    b = FittingMatrix.of(a_minus_i.tolist(), FieldSpec.prime(11), core)
    (out / "core_minrank.mat").write_text(format_matrix(b), encoding="utf-8")
    table = (
        "# The 27 core vertices carry A - I, a rank-7 fitting matrix over F_11.\n"
        "field: F11\n"
        f"S:{{{','.join(fx.CORE)}}} = {fx.CORE_MINRANK}  # core_minrank.mat\n"
    )
    (out / "fixture_oracle.table").write_text(table, encoding="utf-8")
    return g


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).parent / "data")
    regenerate(target)
    print(f"fixture files written to {target}")
