from __future__ import annotations

from fractions import Fraction

from shannon_bounds import combinatorics as comb
from shannon_bounds.fixtures import data_path, load_modified_schlafli
from shannon_bounds.fixtures.constraints import DELETED_EDGES
from shannon_bounds.fixtures.search import clique_lp_value, deletion_order, find_fixture, regenerate
from shannon_bounds.minrank import validate_fixture


def test_regeneration_reproduces_shipped_files(tmp_path):
    regenerate(tmp_path)
    for name in ("modified_schlafli.g", "deletion_script.txt", "core_minrank.mat", "fixture_oracle.table"):
        assert (tmp_path / name).read_text() == data_path(name).read_text(), name


def test_search_is_deterministic_and_valid():
    g, lab = find_fixture()
    assert validate_fixture(g) and clique_lp_value(g) == Fraction(71, 9)
    assert g == load_modified_schlafli()
    assert find_fixture()[1] == lab


def test_deletion_order_moves_6_17_last():
    order = deletion_order()
    assert sorted(order) == sorted(DELETED_EDGES) and order[-1] == ("6", "17")


def test_fixture_basic_invariants():
    g = load_modified_schlafli()
    assert g.n == 28 and comb.independence_number(g) == 7
    assert g.degree(g.index_of("28")) == 9
