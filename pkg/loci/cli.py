"""Command-line front end: `liegiambelli <command> ...`.

Exit status is 0 on success, 1 on a computational error or failed check,
and 2 on a usage error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from lie_tools.config import DEFAULT_ORDER
from lie_tools.errors import InternalError
from lie_tools.free_lie import HallBasis, count_max_depth, lie_bundle, lie_sw_class, partial_dim, witt_dim
from loci.acceptance import SUITES, run_suites
from loci.degeneracy import FORMS, giambelli_class, locus, validate_growth
from loci.strata import (
    classify,
    enumerate_admissible_defects,
    enumerate_bounding_defects,
    growth_from_defect,
    surjection_count,
    witt_bound_check,
    oracle_admissible_defects,
    oracle_bounding_defects,
)

logger = logging.getLogger(__name__)

FORMATS = ("text", "latex", "json")


def _table(header: Sequence[str], rows: List[Sequence], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2)
    cells = [[str(c) for c in row] for row in rows]
    if fmt == "latex":
        lines = ["\\begin{tabular}{" + "r" * len(header) + "}", " & ".join(header) + " \\\\", "\\hline"]
        lines += [" & ".join(row) + " \\\\" for row in cells]
        lines.append("\\end{tabular}")
        return "\n".join(lines)
    widths = [max(len(h), *(len(row[i]) for row in cells)) if cells else len(h)
              for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def cmd_dims(args) -> str:
    bound = {row.k: row.holds for row in witt_bound_check(args.n, args.kmax)} if args.n >= 2 else {}
    header = ["k", "d", "partial", "sharp"]
    if args.m is not None:
        header += ["dimJ", "dimMat", "surjective"]
    header.append("witt_bound")
    rows = []
    for k in range(1, args.kmax + 1):
        row = [k, witt_dim(args.n, k), partial_dim(args.n, k), count_max_depth(args.n, k) if k >= 2 else "-"]
        if args.m is not None:
            if k >= 2:
                dims = surjection_count(args.n, args.m, k)
                row += [dims.dim_jets, dims.dim_matrices, dims.surjective_possible]
            else:
                row += ["-", "-", "-"]
        row.append(bound.get(k, "-"))
        rows.append(row)
    return _table(header, rows, args.format)


def cmd_hall(args) -> str:
    basis = HallBasis(args.n, args.kmax)
    rows = []
    for k in range(1, args.kmax + 1):
        words = basis.max_depth_words(k) if args.max_depth_only else basis.words(k)
        for word in words:
            row = [word.rank, word.length, word.depth]
            if args.raw_depth:
                row.append(word.raw_depth)
            rows.append(row + [word.render(args.compact)])
    header = ["rank", "length", "depth"] + (["raw_depth"] if args.raw_depth else []) + ["word"]
    return _table(header, rows, args.format)


def cmd_chern(args) -> str:
    if args.mod2:
        if args.formal:
            klass = lie_bundle(args.n, args.k, args.order, True).total_class.reduce_mod2({"c": "w"})
        else:
            klass = lie_sw_class(args.n, args.k, args.order)
    else:
        klass = lie_bundle(args.n, args.k, args.order, args.formal).total_class
    if args.format == "json":
        return json.dumps({"rank": witt_dim(args.n, args.k), "class": klass.to_dict()}, indent=2)
    return klass.to_latex() if args.format == "latex" else klass.to_text()


def _bounded_int(low: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < low:
            raise argparse.ArgumentTypeError(f"expected an integer >= {low}, got {value}")
        return value
    return parse


positive_int = _bounded_int(1)
nonnegative_int = _bounded_int(0)


def _parse_growth(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"growth vector must be comma-separated integers, got {text!r}")


def cmd_locus(args) -> str:
    r = validate_growth(args.growth, n=args.n, m=args.m)
    result = locus(r, args.form, args.order)
    if args.format == "json":
        return json.dumps(result.to_dict(), indent=2)
    if args.format == "latex":
        return result.klass.to_latex()
    return "\n".join([
        f"growth: {r}",
        f"reduced: {list(result.reduced.indices)}",
        f"lambda: {result.lam}",
        f"mu: {result.mu}",
        f"cd: {result.cd}",
        f"class: {result.klass}",
    ])


def cmd_strata(args) -> str:
    rows = []
    if args.oracle:
        admissible = [("oracle", d) for d in sorted(oracle_admissible_defects(args.n, args.m))]
        bounding = [("oracle", d, True) for d in sorted(oracle_bounding_defects(args.n, args.m))]
    else:
        admissible = [(c.case, c.defect) for c in enumerate_admissible_defects(args.n, args.m)]
        bounding = [(c.case, c.defect, c.confirmed) for c in enumerate_bounding_defects(args.n, args.m)]
    header = ["case", "defect", "growth", "cd", "classification"]
    if args.with_class:
        header.append("class")
    for case, delta in admissible:
        r = growth_from_defect(args.n, args.m, delta)
        verdict = classify(r)
        row = [case, str(delta), str(r), verdict.cd, verdict.label]
        if args.with_class:
            klass = giambelli_class(r)
            row.append(klass.to_latex() if args.format == "latex" else str(klass))
        rows.append(row)
    for case, delta, confirmed in bounding:
        r = growth_from_defect(args.n, args.m, delta)
        verdict = classify(r)
        label = verdict.label if confirmed else f"{verdict.label} (unconfirmed)"
        row = [case, str(delta), str(r), verdict.cd, label]
        if args.with_class:
            row.append("-")
        rows.append(row)
    return _table(header, rows, args.format)


def cmd_check(args) -> str:
    results = run_suites([name.strip() for name in args.suite.split(",")])
    args.failed = sum(1 for res in results if not res.passed)
    if args.format == "json":
        return json.dumps([res.__dict__ for res in results], indent=2)
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        line = f"{status} [{res.suite}] {res.name}"
        if not res.passed and res.detail:
            line += f": {res.detail}"
        lines.append(line)
    lines.append(f"{len(results) - args.failed} passed, {args.failed} failed")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--verbose", action="store_true", help="log debug messages")

    parser = argparse.ArgumentParser(prog="liegiambelli",
                                     description="Characteristic classes of free Lie algebra bundles "
                                                 "and degeneracy loci of distributions")
    sub = parser.add_subparsers(dest="cmd", required=True)

    dims = sub.add_parser("dims", parents=[common], help="Witt dimensions and dimension counts")
    dims.add_argument("--n", type=positive_int, required=True)
    dims.add_argument("--kmax", type=positive_int, required=True)
    dims.add_argument("--m", type=positive_int, default=None, help="ambient dimension for the jet/matrix count")
    dims.set_defaults(handler=cmd_dims)

    hall = sub.add_parser("hall", parents=[common], help="Hall basis listing")
    hall.add_argument("--n", type=positive_int, required=True)
    hall.add_argument("--kmax", type=positive_int, required=True)
    hall.add_argument("--max-depth-only", action="store_true")
    hall.add_argument("--compact", action="store_true", help="render (u(u,v)) instead of (u (u v))")
    hall.add_argument("--raw-depth", action="store_true", help="also print the tree depth minus one")
    hall.set_defaults(handler=cmd_hall)

    chern = sub.add_parser("chern", parents=[common], help="total class of L^k of a rank-n bundle")
    chern.add_argument("--n", type=positive_int, required=True)
    chern.add_argument("--k", type=positive_int, required=True)
    chern.add_argument("--order", type=nonnegative_int, default=DEFAULT_ORDER)
    chern.add_argument("--mod2", action="store_true", help="Stiefel-Whitney reduction")
    chern.add_argument("--formal", action="store_true", help="keep c_j for j > n")
    chern.set_defaults(handler=cmd_chern)

    loc = sub.add_parser("locus", parents=[common], help="class of the degeneracy locus of a growth vector")
    loc.add_argument("--n", type=positive_int, default=None)
    loc.add_argument("--m", type=positive_int, required=True)
    loc.add_argument("--growth", type=_parse_growth, required=True)
    loc.add_argument("--form", choices=FORMS, default="lambda")
    loc.add_argument("--order", type=nonnegative_int, default=None)
    loc.set_defaults(handler=cmd_locus)

    strata = sub.add_parser("strata", parents=[common], help="admissible and bounding defect vectors")
    strata.add_argument("--n", type=positive_int, required=True)
    strata.add_argument("--m", type=positive_int, required=True)
    strata.add_argument("--oracle", action="store_true", help="brute-force enumeration instead of closed form")
    strata.add_argument("--with-class", action="store_true")
    strata.set_defaults(handler=cmd_strata)

    check = sub.add_parser("check", parents=[common], help="run acceptance suites")
    check.add_argument("--suite", default="all", help=f"comma-separated from {', '.join(SUITES)} or all")
    check.set_defaults(handler=cmd_check)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.failed = 0
    try:
        output = args.handler(args)
    except InternalError as exc:
        logger.error(f"Internal error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as f:
            f.write(output + "\n")
    else:
        print(output)
    return 1 if args.failed else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
