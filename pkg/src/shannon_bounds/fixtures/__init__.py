"""Shipped data fixtures.

``modified_schlafli.g`` is the 28-vertex graph (27-lines graph plus an
apex) with vertex labels "1".."28"; it was produced by
:func:`shannon_bounds.fixtures.search.find_fixture`. Every load re-checks
the textual constraints.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..graph import Graph, parse_graph

__all__ = [
    "data_path",
    "load_modified_schlafli",
    "load_deletion_script",
    "load_fixture_oracle_table",
    "load_core_minrank_matrix",
]


def data_path(name: str) -> Path:
    return Path(str(resources.files(__package__) / "data" / name))


@lru_cache(maxsize=1)
def load_modified_schlafli() -> Graph:
    from ..minrank import fixture_violations

    g = parse_graph(data_path("modified_schlafli.g").read_text(encoding="utf-8"))
    bad = fixture_violations(g)
    if bad:
        raise ValueError("shipped fixture fails validation: " + "; ".join(bad[:3]))
    return g


def load_deletion_script():
    from ..minrank import read_script

    return read_script(data_path("deletion_script.txt"))


def load_fixture_oracle_table():
    """``(field, table)`` for the fixture's certified minrank entries."""
    from ..capacity import read_oracle_table

    return read_oracle_table(data_path("fixture_oracle.table"), load_modified_schlafli())


def load_core_minrank_matrix():
    from ..graph import induced_subgraph
    from ..minrank import read_matrix
    from .constraints import CORE

    g = load_modified_schlafli()
    core = induced_subgraph(g, [g.index_of(x) for x in CORE])
    return read_matrix(data_path("core_minrank.mat"), core)
