"""Command-line interface.

Subcommands:

    ingest    parse an embedding file, preprocess, write native container
    combine   average or concatenate two or more native sets
    angles    sample cross-set difference angles, write histogram CSV
    eval      score sets on similarity/analogy benchmarks
    run       execute a full pipeline from a config file

All commands are deterministic given identical inputs, flags and seeds,
and never modify their input files. Reports are delimited text; the
plotting options render matplotlib figures next to them.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .angles import export_histogram, sample_angles
from .combine import MetaRecipe, combine_k
from .evaluation import format_suite_table, load_analogy, load_similarity, run_suite, suite_to_csv
from .formats import LOADERS, load_native, save_native
from .pipeline import apply_steps, expand_dataset_paths, parse_config, run_pipeline
from .sets import intersect


class _StepAction(argparse.Action):
    """Record preprocessing flags in the order they appear."""

    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, "steps", None)
        if steps is None:
            steps = []
            namespace.steps = steps
        steps.append(self.const if self.const is not None else f"pad:{values}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metaemb", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse, preprocess and store an embedding set")
    p_ingest.add_argument("input", type=Path)
    p_ingest.add_argument("-o", "--output", type=Path, required=True)
    p_ingest.add_argument("--format", choices=sorted(LOADERS), default="text")
    p_ingest.add_argument("--name", default=None, help="set name (default: output file stem)")
    p_ingest.add_argument(
        "--norm-dims", action=_StepAction, nargs=0, const="norm-dims", dest="steps",
        help="scale each dimension to unit norm across the vocabulary",
    )
    p_ingest.add_argument(
        "--norm-vectors", action=_StepAction, nargs=0, const="norm-vectors", dest="steps",
        help="scale each word vector to unit norm",
    )
    p_ingest.add_argument(
        "--pad", action=_StepAction, metavar="SIDE:COUNT", dest="steps",
        help="zero-pad every vector, e.g. rear:200",
    )

    p_combine = sub.add_parser("combine", help="combine native sets into a meta-embedding set")
    p_combine.add_argument("inputs", nargs="+", type=Path, help="two or more native files")
    p_combine.add_argument("--method", choices=["avg", "concat"], required=True)
    p_combine.add_argument("-o", "--output", type=Path, required=True)
    p_combine.add_argument("--name", default=None, help="set name (default: output file stem)")
    p_combine.add_argument("--pad-sides", default=None, metavar="SIDE[,SIDE...]",
                           help="per-source pad side for avg of unequal dims (default: rear)")
    p_combine.add_argument("--post-normalize", action="store_true",
                           help="scale combined rows to unit norm")

    p_angles = sub.add_parser("angles", help="sample cross-set difference-vector angles")
    p_angles.add_argument("left", type=Path)
    p_angles.add_argument("right", type=Path)
    p_angles.add_argument("--pairs", type=int, default=200_000)
    p_angles.add_argument("--seed", type=int, default=0)
    p_angles.add_argument("--bins", type=int, default=100)
    p_angles.add_argument("--out", type=Path, required=True, help="histogram CSV path")
    p_angles.add_argument("--plot", type=Path, default=None, help="also render a histogram figure")

    p_eval = sub.add_parser("eval", help="score sets on benchmarks")
    p_eval.add_argument("sets", nargs="+", type=Path, help="native files to score")
    p_eval.add_argument("--sim", nargs="*", type=Path, default=[],
                        help="similarity dataset files or directories")
    p_eval.add_argument("--analogy", nargs="*", type=Path, default=[], help="analogy dataset files")
    p_eval.add_argument("--out", type=Path, default=None, help="write results CSV here")
    p_eval.add_argument("--plot", type=Path, default=None, help="also render a score chart")

    p_run = sub.add_parser("run", help="execute a pipeline config end to end")
    p_run.add_argument("config", type=Path)

    return parser


def cmd_ingest(args) -> int:
    es = LOADERS[args.format](args.input, name=args.name or args.output.stem)
    es = apply_steps(es, getattr(args, "steps", None) or [])
    save_native(es, args.output)
    print(f"{es.name}: {len(es)} tokens, dim {es.dim} -> {args.output}")
    return 0


def cmd_combine(args) -> int:
    if len(args.inputs) < 2:
        print("error: combine needs at least two input sets", file=sys.stderr)
        return 1
    loaded = []
    names = []
    for path in args.inputs:
        es = load_native(path)
        if es.name in names:  # same file given twice; keep identifiers distinct
            es = load_native(path, name=f"{es.name}#{names.count(es.name) + 1}")
        names.append(es.name.split("#")[0])
        loaded.append(es)
    pad_sides = tuple(args.pad_sides.split(",")) if args.pad_sides else None
    if pad_sides and len(pad_sides) == 1:
        pad_sides = pad_sides * len(loaded)
    recipe = MetaRecipe(
        args.method,
        tuple(es.name for es in loaded),
        pad_to_common_dim=True,
        pad_sides=pad_sides,
        post_normalize=args.post_normalize,
    )
    out = combine_k(loaded, recipe, name=args.name or args.output.stem)
    save_native(out, args.output)
    print(f"{out.name}: intersection {len(out)} tokens, dim {out.dim} -> {args.output}")
    return 0


def cmd_angles(args) -> int:
    left = load_native(args.left)
    right = load_native(args.right)
    pair = intersect(left, right)
    stats = sample_angles(pair, args.pairs, args.seed, bins=args.bins)
    export_histogram(stats, args.out)
    print(f"{left.name} & {right.name} {stats.mean:.4f} {stats.variance:.4f}")
    if stats.skipped:
        print(f"skipped {stats.skipped} degenerate pair(s)", file=sys.stderr)
    if args.plot is not None:
        from .plots import plot_angle_histogram

        plot_angle_histogram(stats, args.plot, title=f"{left.name} & {right.name}")
    return 0


def cmd_eval(args) -> int:
    sets = [load_native(p) for p in args.sets]
    sim_paths = expand_dataset_paths(args.sim)
    if args.sim and not sim_paths:
        print("error: no similarity dataset files found", file=sys.stderr)
        return 1
    sim_data = [load_similarity(p) for p in sim_paths]
    ana_data = [load_analogy(p) for p in args.analogy]
    if not sim_data and not ana_data:
        print("error: no datasets given", file=sys.stderr)
        return 1
    reports = run_suite(sets, sim_data, ana_data)
    print(format_suite_table(reports, sets), end="")
    failures = [r for r in reports if r.error]
    for r in failures:
        print(f"cell {r.set_name}/{r.dataset} missing: {r.error}", file=sys.stderr)
    if args.out is not None:
        args.out.write_text(suite_to_csv(reports), encoding="utf-8")
    if args.plot is not None:
        from .plots import plot_suite

        plot_suite(reports, args.plot, sets)
    return 0 if len(failures) < len(reports) else 1


def cmd_run(args) -> int:
    cfg = parse_config(args.config)
    run_pipeline(cfg)
    return 0


_HANDLERS = {
    "ingest": cmd_ingest,
    "combine": cmd_combine,
    "angles": cmd_angles,
    "eval": cmd_eval,
    "run": cmd_run,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
