"""Certified upper bounds on the Shannon capacity of graphs.

Exact rational LPs, minrank over fields, and a certified Lovász theta
feed the f* construction: for any submultiplicative upper bound f on the
independence number, f* is again such a bound and never exceeds f.
"""

from .capacity import (
    BoundOracle,
    FStarResult,
    OracleFlags,
    SubsetFamily,
    check_additivity,
    fstar,
    fstar_full,
    geometric_mean_oracle,
    make_clique_cover_oracle,
    make_exact_minrank_oracle,
    make_fractional_independence_oracle,
    make_independence_oracle,
    make_minrank_oracle,
    make_theta_oracle,
    optimize_geometric_mean,
    union_bound_corollary,
)
from .combinatorics import (
    clique_cover_number,
    fractional_independence,
    independence_number,
    maximal_cliques,
    maximum_independent_set,
)
from .graph import (
    Graph,
    VertexSet,
    apex_extension,
    complement,
    complete,
    cycle,
    disjoint_union,
    empty,
    graph_power,
    induced_subgraph,
    path,
    random_graph,
    schlafli_complement,
    strong_product,
)
from .index_coding import BoundReport, SchemePlan, broadcast_report, bukh_cox_witness, scheme_from_cover
from .minrank import (
    FieldSpec,
    FittingMatrix,
    check_fits,
    minrank_search,
    minrank_upper,
    rank,
    replay_deletion_proof,
    tims_step,
    validate_fixture,
)
from .rational_lp import LpCertificate, LpProblem, solve, verify_certificate
from .theta import ThetaResult, lovasz_theta

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
