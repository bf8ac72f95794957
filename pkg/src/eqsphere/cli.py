"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 data error.  Data goes to stdout
(or ``-o``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as eio
from .compare import ConfigError, compare, generate
from .geometry import DomainError
from .lookup import lookup_many
from .metrics import compute_metrics
from .partition import PartitionSpec, eq_partition
from .points import CodeSet, GENERATORS, eq_points

BUILTIN = [g for g in GENERATORS if g != "external"]

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(cast):
    def parse(text):
        try:
            return [cast(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _spec(args) -> PartitionSpec:
    if args.d is None or args.n is None:
        raise UsageError("both -d and -n are required")
    if args.d < 1:
        raise UsageError(f"dimension must be >= 1, got {args.d}")
    if args.n < 1:
        raise UsageError(f"number of regions must be >= 1, got {args.n}")
    return PartitionSpec(args.d, args.n, args.offsets)


def _load_tree(path: str):
    try:
        return eio.tree_from_json(Path(path).read_text())
    except OSError as exc:
        raise eio.DataError(str(exc)) from exc


def cmd_partition(args) -> None:
    tree = eq_partition(_spec(args))
    _emit(eio.tree_to_json(tree), args.output)


def _code_from_args(args):
    if getattr(args, "tree", None):
        tree = _load_tree(args.tree)
        if args.generator != "eqp":
            raise UsageError("--tree only applies to the eqp generator")
        return eq_points(tree), tree
    spec = _spec(args)
    if args.generator == "eqp":
        tree = eq_partition(spec)
        return eq_points(tree), tree
    return generate(args.generator, spec.d, spec.N, args.seed), None


def cmd_points(args) -> None:
    code, _ = _code_from_args(args)
    text = eio.points_to_json(code) if args.format == "json" else eio.points_to_csv(code)
    _emit(text, args.output)


def cmd_metrics(args) -> None:
    if args.points:
        pts, code = eio.read_points_file(args.points, args.d)
        tree = _load_tree(args.tree) if args.tree else None
        if code is None:
            if len(pts) == 0:
                raise eio.DataError("point file is empty")
            gen = "eqp" if tree is not None else "external"
            code = CodeSet(pts.shape[1] - 1, pts, gen, {"source": str(args.points)})
        if tree is not None and tree.N != code.N:
            raise eio.DataError("partition and point file sizes differ")
    else:
        code, tree = _code_from_args(args)
    if code.N < 2:
        raise UsageError("metrics need at least two points")
    report = compute_metrics(code, tree, s_values=args.s_values, samples=args.samples,
                             trials=args.trials, seed=args.seed)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.output)


def cmd_lookup(args) -> None:
    tree = _load_tree(args.tree)
    try:
        pts, _ = eio.read_points_file(args.points, tree.d)
    except OSError as exc:
        raise eio.DataError(str(exc)) from exc
    _emit(eio.indices_to_csv(lookup_many(tree, pts)), args.output)


def cmd_boundaries(args) -> None:
    tree = _load_tree(args.tree)
    if tree.d != 2:
        raise eio.DataError(f"boundaries are only available for d = 2 partitions, got d = {tree.d}")
    _emit(eio.boundaries_to_csv(tree, args.resolution), args.output)


def cmd_compare(args) -> None:
    table = compare(args.generators, args.sizes, args.metrics, seed=args.seed, d=args.d,
                    samples=args.samples, trials=args.trials, offset_scheme=args.offsets)
    _emit(table.to_json() if args.format == "json" else table.to_csv(), args.output)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eqsphere", description="Recursive zonal equal-area sphere partitions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_args(sp, required=True):
        sp.add_argument("-d", type=int, required=required, help="sphere dimension")
        sp.add_argument("-n", type=int, required=required, help="number of regions/points")
        sp.add_argument("--offsets", choices=["none", "stagger"], default="none")

    def out_arg(sp, formats=None):
        sp.add_argument("-o", "--output", help="output file (default stdout)")
        if formats:
            sp.add_argument("--out", dest="format", choices=formats, default=formats[0])

    sp = sub.add_parser("partition", help="build EQ(d,N) and write it as JSON")
    spec_args(sp)
    out_arg(sp, ["json"])
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("points", help="write a point set")
    spec_args(sp, required=False)
    sp.add_argument("-g", "--generator", choices=BUILTIN, default="eqp")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tree", help="partition JSON to take EQP points from")
    out_arg(sp, ["csv", "json"])
    sp.set_defaults(func=cmd_points)

    sp = sub.add_parser("metrics", help="quality report for a point set")
    spec_args(sp, required=False)
    sp.add_argument("-g", "--generator", choices=BUILTIN, default="eqp")
    sp.add_argument("--points", help="point file (CSV or JSON) instead of -d/-n/-g")
    sp.add_argument("--tree", help="partition JSON (adds region diameters)")
    sp.add_argument("--s-values", type=_csv_list(float), default=[1.0])
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    out_arg(sp, ["json", "csv"])
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("lookup", help="region index of every point in a file")
    sp.add_argument("tree")
    sp.add_argument("points")
    out_arg(sp)
    sp.set_defaults(func=cmd_lookup)

    sp = sub.add_parser("boundaries", help="region boundary polylines of an S^2 partition")
    sp.add_argument("tree")
    sp.add_argument("--resolution", type=float, default=0.05)
    out_arg(sp)
    sp.set_defaults(func=cmd_boundaries)

    sp = sub.add_parser("compare", help="long-form metric table across generators")
    sp.add_argument("-d", type=int, default=2)
    sp.add_argument("-n", dest="sizes", type=_csv_list(int), required=True)
    sp.add_argument("-g", "--generators", type=_csv_list(str), default=["eqp", "spiral", "fibonacci"])
    sp.add_argument("--metrics", type=_csv_list(str), default=["min_distance", "log_energy"])
    sp.add_argument("--offsets", choices=["none", "stagger"], default="none")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    out_arg(sp, ["csv", "json"])
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ConfigError, DomainError) as exc:
        print(f"eqsphere {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (eio.DataError, NotImplementedError) as exc:
        print(f"eqsphere {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:
        sys.stderr.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
