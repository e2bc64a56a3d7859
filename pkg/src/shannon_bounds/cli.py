"""Command-line interface.

Exit codes: 0 success, 1 computation failure, 2 usage error (bad
arguments or unreadable input), 3 replay mismatch.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import combinatorics as comb
from .cache import ResultCache, default_cache, theta_interval
from .capacity import (
    SubsetFamily,
    fstar,
    fstar_full,
    make_clique_cover_oracle,
    make_exact_minrank_oracle,
    make_fractional_independence_oracle,
    make_independence_oracle,
    make_minrank_oracle,
    make_theta_oracle,
    read_family,
    read_oracle_table,
)
from .graph import (
    Graph,
    complete,
    cycle,
    disjoint_union,
    empty,
    format_graph,
    graph_power,
    path,
    random_graph,
    read_graph,
    schlafli_complement,
    strong_product,
)
from .index_coding import broadcast_report, scheme_from_cover
from .minrank import (
    FieldSpec,
    _search_allowed,
    clique_partition_matrix,
    minrank_search,
    minrank_upper,
    read_matrix,
    read_script,
    replay_deletion_proof,
)
from .rational_lp import format_lp, format_rational
from .replay import CASES, run_case

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2, 3

_log = logging.getLogger("shannon_bounds")


class UsageError(Exception):
    pass


def _interval(lo, hi) -> str:
    def f(x):
        if x is None:
            return "-"
        if isinstance(x, float):
            return repr(x)
        return format_rational(x)

    return f"[{f(lo)}, {f(hi)}]"


def _load(path: str) -> Graph:
    try:
        return read_graph(path)
    except OSError as exc:
        raise UsageError(f"cannot read graph {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise UsageError(f"malformed graph file {path}: {exc}") from None


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cache(args) -> ResultCache | None:
    return ResultCache(args.cache) if args.cache else default_cache()


# subcommands --------------------------------------------------------------------

_GENERATORS = {
    "cycle": (1, lambda a: cycle(int(a[0]))),
    "path": (1, lambda a: path(int(a[0]))),
    "complete": (1, lambda a: complete(int(a[0]))),
    "empty": (1, lambda a: empty(int(a[0]))),
    "schlafli-complement": (0, lambda a: schlafli_complement()),
}


def cmd_gen(args) -> int:
    name = args.name
    if name == "modified-schlafli":
        from .fixtures import load_modified_schlafli

        g = load_modified_schlafli()
    elif name == "random":
        if not 1 <= len(args.params) <= 2:
            raise UsageError("random takes N [P]")
        p = float(args.params[1]) if len(args.params) > 1 else 0.5
        g = random_graph(int(args.params[0]), p, args.seed)
    elif name in _GENERATORS:
        arity, make = _GENERATORS[name]
        if len(args.params) != arity:
            raise UsageError(f"{name} takes {arity} parameter(s)")
        try:
            g = make(args.params)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError(f"unknown graph {name!r}")
    _emit(format_graph(g), args.output)
    return EXIT_OK


def cmd_alpha(args) -> int:
    g = _load(args.graph)
    s = comb.maximum_independent_set(g)
    print(len(s))
    if args.witness:
        print("{" + ",".join(g.label(v) for v in s) + "}")
    return EXIT_OK


def cmd_alphaf(args) -> int:
    g = _load(args.graph)
    value, _ = comb.fractional_independence(g)
    print(format_rational(value))
    return EXIT_OK


def cmd_theta(args) -> int:
    g = _load(args.graph)
    lo, hi = theta_interval(g, args.tolerance, _cache(args))
    print(_interval(lo, hi))
    return EXIT_OK


def cmd_minrank(args) -> int:
    g = _load(args.graph)
    fld = _field(args.field)
    alpha = comb.independence_number(g)
    lower, upper, notes = alpha, None, []
    if args.matrix:
        try:
            b = read_matrix(args.matrix, g)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read matrix {args.matrix}: {exc}") from None
        if b.field != fld and args.field_given:
            raise UsageError(f"matrix is over {b.field}, not {fld}")
        fld = b.field
        upper = minrank_upper(g, b)
        notes.append(f"upper: fitting matrix over {fld}")
    if args.deletion_script:
        try:
            script = read_script(args.deletion_script)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read deletion script: {exc}") from None
        outcome = replay_deletion_proof(g, script)
        for line in outcome.trail:
            notes.append(line)
        if outcome.proves_gap:
            lower = alpha + 1
    if _search_allowed(g, fld):
        exact, _ = minrank_search(g, fld)
        lower = upper = exact
        notes.append("exhaustive search")
    elif upper is None and g.n <= comb.MAX_COVER_VERTICES:
        upper = clique_partition_matrix(g, comb.minimum_clique_cover(g), fld).rank()
        notes.append("upper: clique partition matrix")
    elif upper is None:
        upper = g.n
    print(str(lower) if lower == upper else _interval(lower, upper))
    for line in notes:
        _log.info(line)
        if args.verbose:
            print("# " + line)
    return EXIT_OK


def _oracle(args, g: Graph):
    kind = args.oracle
    if args.oracle_table:
        try:
            fld, table = read_oracle_table(args.oracle_table, g)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read oracle table: {exc}") from None
        return make_minrank_oracle(fld, table, g)
    if kind == "minrank":
        return make_minrank_oracle(_field(args.field))
    if kind == "exact-minrank":
        return make_exact_minrank_oracle(_field(args.field))
    if kind == "theta":
        return make_theta_oracle(args.tolerance, _cache(args))
    return {
        "alpha": make_independence_oracle,
        "alphaf": make_fractional_independence_oracle,
        "cover": make_clique_cover_oracle,
    }[kind]()


def _family(args, g: Graph) -> SubsetFamily:
    if args.family:
        try:
            fam = read_family(args.family, g)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read family: {exc}") from None
        if args.with_cliques:
            fam = SubsetFamily.default(g).union(fam)
        return fam
    return SubsetFamily.default(g)


def cmd_fstar(args) -> int:
    g = _load(args.graph)
    oracle = _oracle(args, g)
    r = fstar_full(g, oracle) if args.full else fstar(g, oracle, _family(args, g))
    print(format_rational(r.value))
    for claim in r.claims:
        print("# " + claim)
    if args.scheme:
        plan = scheme_from_cover(g, r)
        print(f"# scheme: t={plan.t} p={plan.p} rate={format_rational(plan.total_rate)}")
        for (s, y), rate in zip(plan.subsets, plan.rates):
            print(f"#   {{{','.join(g.label(v) for v in s)}}} x{y} rate {format_rational(rate)}")
    if args.dump_lp:
        Path(args.dump_lp).write_text(format_lp(r.problem), encoding="utf-8")
    return EXIT_OK


def cmd_product(args) -> int:
    g = _load(args.left)
    if args.power:
        out = graph_power(g, args.power)
    else:
        if not args.right:
            raise UsageError("product needs two graphs or --power")
        out = strong_product(g, _load(args.right))
    _emit(format_graph(out), args.output)
    return EXIT_OK


def cmd_union(args) -> int:
    g = _load(args.graphs[0])
    for p in args.graphs[1:]:
        g = disjoint_union(g, _load(p))
    _emit(format_graph(g), args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    g = _load(args.graph)
    fields = [_field(f) for f in (args.field or [])]
    oracles, families = [], []
    if args.oracle_table:
        oracle = _oracle(args, g)
        oracles.append(oracle)
        fld = FieldSpec.parse(oracle.name[oracle.name.index("[") + 1 : -1])
        if fld not in fields:
            fields.append(fld)
    for f in fields:
        if not f.is_rational and not args.oracle_table:
            oracles.append(make_minrank_oracle(f))
    families.append(_family(args, g))
    matrices = []
    for m in args.matrix or []:
        try:
            matrices.append(read_matrix(m, g))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read matrix {m}: {exc}") from None
    script = None
    if args.deletion_script:
        try:
            script = read_script(args.deletion_script)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read deletion script: {exc}") from None
    rep = broadcast_report(
        g, fields, oracles, families, graph_id=Path(args.graph).stem, tolerance=args.tolerance,
        matrices=matrices, deletion_script=script,
    )
    if args.json:
        print(rep.dumps())
    else:
        print("\n".join(rep.lines()))
        print(f"Theta in {_interval(*rep.interval('theta'))}")
        print(f"beta in {_interval(*rep.interval('beta'))}")
    bad = rep.chain_violations()
    for b in bad:
        print(f"chain violation: {b}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_replay(args) -> int:
    ids = list(CASES) if args.case == "all" else [args.case]
    if args.case != "all" and args.case not in CASES:
        raise UsageError(f"unknown replay case {args.case!r}; known: {', '.join(CASES)}")
    cache = _cache(args)
    failed = False
    for cid in ids:
        out = run_case(cid, args.tolerance, args.seed, cache)
        if args.case != "all" and out.ok:
            print(out.actual)
        else:
            print(out.line())
        if not out.ok:
            failed = True
            print(f"replay mismatch in {cid}: expected {out.expected}, got {out.actual} [{out.provenance}]", file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


# parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-7, help="SDP interval tolerance (default 1e-7)")
    common.add_argument("--seed", type=int, default=0, help="seed for random graphs and corpora")
    common.add_argument("--cache", help="result cache directory (default: $SHANNON_BOUNDS_CACHE)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="shannon-bounds", description="Bounds on Shannon capacity and broadcast rate.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="write a named graph")
    s.add_argument("name", help="cycle|path|complete|empty N, random N [P], schlafli-complement, modified-schlafli")
    s.add_argument("params", nargs="*")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("alpha", parents=[common], help="independence number")
    s.add_argument("graph")
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("alphaf", parents=[common], help="fractional independence number")
    s.add_argument("graph")
    s.set_defaults(func=cmd_alphaf)

    s = sub.add_parser("theta", parents=[common], help="certified Lovász theta interval")
    s.add_argument("graph")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("minrank", parents=[common], help="minrank bounds")
    s.add_argument("graph")
    s.add_argument("--field", default=None, help="Q or a prime p (default Q)")
    s.add_argument("--matrix", help="fitting matrix file")
    s.add_argument("--deletion-script", help="edge-deletion proof script")
    s.set_defaults(func=cmd_minrank)

    s = sub.add_parser("fstar", parents=[common], help="the f* LP")
    s.add_argument("graph")
    s.add_argument("--oracle", choices=["minrank", "exact-minrank", "theta", "alpha", "alphaf", "cover"], default="minrank")
    s.add_argument("--field", default="Q")
    s.add_argument("--oracle-table", help="certified minrank table")
    s.add_argument("--family", help="subset family file (default: maximal cliques and V)")
    s.add_argument("--with-cliques", action="store_true", help="add maximal cliques and V to --family")
    s.add_argument("--full", action="store_true", help="all 2^n - 1 subsets (n <= 16)")
    s.add_argument("--scheme", action="store_true", help="print the index-coding scheme plan")
    s.add_argument("--dump-lp", help="write the cover LP to this file")
    s.set_defaults(func=cmd_fstar)

    s = sub.add_parser("product", parents=[common], help="strong product or power")
    s.add_argument("left")
    s.add_argument("right", nargs="?")
    s.add_argument("--power", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("union", parents=[common], help="disjoint union")
    s.add_argument("graphs", nargs="+")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_union)

    s = sub.add_parser("report", parents=[common], help="capacity and broadcast-rate bound report")
    s.add_argument("graph")
    s.add_argument("--field", action="append", help="field for minrank entries (repeatable)")
    s.add_argument("--oracle-table")
    s.add_argument("--oracle", default="minrank", help=argparse.SUPPRESS)
    s.add_argument("--family")
    s.add_argument("--with-cliques", action="store_true")
    s.add_argument("--matrix", action="append")
    s.add_argument("--deletion-script")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("replay", parents=[common], help="recompute reference values")
    s.add_argument("case", help="|".join(CASES) + "|all")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "field", None) is None and args.command == "minrank":
        args.field, args.field_given = "Q", False
    elif args.command == "minrank":
        args.field_given = True
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError, ArithmeticError, KeyError, LookupError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
