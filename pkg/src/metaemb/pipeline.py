"""Declarative end-to-end pipelines: ingest, combine, angles, evaluate.

A pipeline is described by a line-oriented config file. Tokens are
whitespace-separated; lines starting with ``#`` (and blank lines) are
ignored. Directives:

    output_dir PATH          where all outputs go (default: out)
    seed INT                 seed for angle sampling (default: 0)
    pairs INT                sampled pairs per angle analysis (default: 200000)
    bins INT                 histogram bins (default: 100)
    source NAME FMT PATH [STEP ...]
                             declare an input embedding file; FMT is
                             text | word2vec | native; steps among
                             norm-dims, norm-vectors, pad:SIDE:COUNT
                             apply in the order written
    combine NAME METHOD SRC SRC [SRC ...]
                             METHOD is avg | concat; SRC names must be
                             declared above this line
    angles LEFT RIGHT        angle analysis between two declared sets
    sim PATH                 similarity dataset file, or a directory of them
    analogy PATH             analogy dataset file
    eval NAME[,NAME...]|all  score the named sets on all datasets

Every output (native sets, histogram CSVs and figures, results table)
is written under ``output_dir`` together with ``manifest.json``, which
records input hashes, parameters, seeds and protocol choices; rerunning
the same config reproduces identical outputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .angles import GENERATOR_NAME, export_histogram, sample_angles
from .combine import MetaRecipe, canonical_method, combine_k
from .evaluation import (
    format_suite_table,
    load_analogy,
    load_similarity,
    run_suite,
    suite_to_csv,
)
from .formats import LOADERS, save_native
from .sets import intersect
from .vecmath import PadSpec, normalize_dimensions, normalize_vectors, pad_set

PROTOCOL = {
    "rng": GENERATOR_NAME,
    "pair_sampling": "uniform with replacement across pairs, u != v within a pair",
    "variance_estimator": "unbiased (n-1 denominator)",
    "histogram": "equal-width bins over [0, pi]; density = frequency / (n * bin_width)",
    "oov_policy": "benchmark entries with out-of-vocabulary tokens are skipped and counted",
    "analogy_candidates": "full vocabulary excluding the three query tokens; ties to lowest index",
    "token_matching": "exact byte equality, no case folding",
    "score_scale": "reported scores are x100 with one decimal",
    "step_order": "normalization and padding steps apply in declaration order",
}


def parse_step(step: str):
    """Validate a preprocessing step token and return an applier."""
    if step == "norm-dims":
        return normalize_dimensions
    if step == "norm-vectors":
        return normalize_vectors
    if step.startswith("pad:"):
        parts = step.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad pad step {step!r}; expected pad:SIDE:COUNT")
        side = parts[1]
        try:
            count = int(parts[2])
        except ValueError:
            raise ValueError(f"bad pad count in {step!r}") from None
        spec = PadSpec(side, count)
        return lambda es: pad_set(es, spec)
    raise ValueError(f"unknown step {step!r}")


def apply_steps(es, steps: list[str]):
    """Apply preprocessing steps to a set, in order."""
    for step in steps:
        es = parse_step(step)(es)
    return es


@dataclass
class SourceSpec:
    name: str
    fmt: str
    path: Path
    steps: list[str] = field(default_factory=list)


@dataclass
class CombineSpec:
    name: str
    method: str
    sources: list[str]


@dataclass
class PipelineConfig:
    output_dir: Path = Path("out")
    seed: int = 0
    pairs: int = 200_000
    bins: int = 100
    sources: list[SourceSpec] = field(default_factory=list)
    combines: list[CombineSpec] = field(default_factory=list)
    angle_pairs: list[tuple[str, str]] = field(default_factory=list)
    sim_paths: list[Path] = field(default_factory=list)
    analogy_paths: list[Path] = field(default_factory=list)
    eval_sets: list[str] | None = None  # None: no eval; []: all declared sets


def parse_config(path: str | Path) -> PipelineConfig:
    """Parse and validate a pipeline config; fails before any work."""
    cfg = PipelineConfig()
    declared: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            directive, args = tokens[0], tokens[1:]

            def fail(message: str):
                raise ValueError(f"{path}: line {line_no}: {message}")

            if directive == "output_dir":
                if len(args) != 1:
                    fail("output_dir takes one path")
                cfg.output_dir = Path(args[0])
            elif directive in ("seed", "pairs", "bins"):
                if len(args) != 1 or not args[0].lstrip("-").isdigit():
                    fail(f"{directive} takes one integer")
                value = int(args[0])
                if directive != "seed" and value < 1:
                    fail(f"{directive} must be positive")
                if directive == "seed" and value < 0:
                    fail("seed must be non-negative")
                setattr(cfg, directive, value)
            elif directive == "source":
                if len(args) < 3:
                    fail("source takes NAME FMT PATH [STEP ...]")
                name, fmt, src = args[0], args[1], Path(args[2])
                if name in declared:
                    fail(f"set {name!r} declared twice")
                if fmt not in LOADERS:
                    fail(f"unknown format {fmt!r}; expected one of {sorted(LOADERS)}")
                for step in args[3:]:
                    parse_step(step)
                if not src.is_file():
                    fail(f"input file not found: {src}")
                cfg.sources.append(SourceSpec(name, fmt, src, list(args[3:])))
                declared.add(name)
            elif directive == "combine":
                if len(args) < 4:
                    fail("combine takes NAME METHOD SRC SRC [SRC ...]")
                name, method, srcs = args[0], args[1], args[2:]
                if name in declared:
                    fail(f"set {name!r} declared twice")
                canonical_method(method)
                for src_name in srcs:
                    if src_name not in declared:
                        fail(f"undeclared source {src_name!r}")
                if len(set(srcs)) != len(srcs):
                    fail("combine sources must be distinct")
                cfg.combines.append(CombineSpec(name, method, list(srcs)))
                declared.add(name)
            elif directive == "angles":
                if len(args) != 2:
                    fail("angles takes LEFT RIGHT")
                for src_name in args:
                    if src_name not in declared:
                        fail(f"undeclared source {src_name!r}")
                cfg.angle_pairs.append((args[0], args[1]))
            elif directive == "sim":
                if len(args) != 1:
                    fail("sim takes one path")
                if not Path(args[0]).exists():
                    fail(f"dataset path not found: {args[0]}")
                cfg.sim_paths.append(Path(args[0]))
            elif directive == "analogy":
                if len(args) != 1:
                    fail("analogy takes one path")
                if not Path(args[0]).is_file():
                    fail(f"dataset file not found: {args[0]}")
                cfg.analogy_paths.append(Path(args[0]))
            elif directive == "eval":
                if len(args) != 1:
                    fail("eval takes NAME[,NAME...] or all")
                if args[0] == "all":
                    cfg.eval_sets = []
                else:
                    names = args[0].split(",")
                    for set_name in names:
                        if set_name not in declared:
                            fail(f"undeclared source {set_name!r}")
                    cfg.eval_sets = names
            else:
                fail(f"unknown directive {directive!r}")
    if not cfg.sources:
        raise ValueError(f"{path}: config declares no sources")
    if cfg.eval_sets is not None and not (cfg.sim_paths or cfg.analogy_paths):
        raise ValueError(f"{path}: eval requested but no sim/analogy datasets declared")
    return cfg


def expand_dataset_paths(paths) -> list[Path]:
    """Expand directories to their (sorted) contained files."""
    out: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.is_file()))
        else:
            out.append(p)
    return out


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def run_pipeline(cfg: PipelineConfig, echo=print) -> dict:
    """Execute a parsed pipeline and write outputs plus manifest.json."""
    out_root = cfg.output_dir
    sets_dir = out_root / "sets"
    sets_dir.mkdir(parents=True, exist_ok=True)

    manifest: dict = {
        "tool": {"name": "metaemb", "version": __version__},
        "parameters": {"seed": cfg.seed, "pairs": cfg.pairs, "bins": cfg.bins},
        "protocol": PROTOCOL,
        "sources": {},
        "combined": {},
        "angles": [],
        "evaluation": None,
        "outputs": [],
    }
    loaded = {}

    for spec in cfg.sources:
        es = LOADERS[spec.fmt](spec.path, name=spec.name)
        es = apply_steps(es, spec.steps)
        target = sets_dir / f"{spec.name}.meb"
        save_native(es, target)
        loaded[spec.name] = es
        rel = str(target.relative_to(out_root))
        manifest["sources"][spec.name] = {
            "path": str(spec.path),
            "format": spec.fmt,
            "sha256": _sha256(spec.path),
            "steps": spec.steps,
            "tokens": len(es),
            "dim": es.dim,
            "output": rel,
        }
        manifest["outputs"].append(rel)
        echo(f"ingested {spec.name}: {len(es)} tokens, dim {es.dim}")

    for spec in cfg.combines:
        recipe = MetaRecipe(spec.method, tuple(spec.sources), pad_to_common_dim=True)
        es = combine_k([loaded[n] for n in spec.sources], recipe, name=spec.name)
        target = sets_dir / f"{spec.name}.meb"
        save_native(es, target)
        loaded[spec.name] = es
        rel = str(target.relative_to(out_root))
        manifest["combined"][spec.name] = {
            "method": recipe.method,
            "sources": spec.sources,
            "tokens": len(es),
            "dim": es.dim,
            "output": rel,
        }
        manifest["outputs"].append(rel)
        echo(f"combined {spec.name}: {len(es)} tokens, dim {es.dim}")

    if cfg.angle_pairs:
        from .plots import plot_angle_histogram

        angles_dir = out_root / "angles"
        angles_dir.mkdir(exist_ok=True)
        for left_name, right_name in cfg.angle_pairs:
            pair = intersect(loaded[left_name], loaded[right_name])
            stats = sample_angles(pair, cfg.pairs, cfg.seed, bins=cfg.bins)
            stem = f"{left_name}__{right_name}"
            csv_path = angles_dir / f"{stem}.csv"
            fig_path = angles_dir / f"{stem}.png"
            export_histogram(stats, csv_path)
            plot_angle_histogram(stats, fig_path, title=f"{left_name} & {right_name}")
            rel_csv = str(csv_path.relative_to(out_root))
            rel_fig = str(fig_path.relative_to(out_root))
            manifest["angles"].append(
                {
                    "left": left_name,
                    "right": right_name,
                    "pairs": cfg.pairs,
                    "seed": stats.seed,
                    "generator": stats.generator,
                    "mean": stats.mean,
                    "variance": stats.variance,
                    "skipped": stats.skipped,
                    "csv": rel_csv,
                    "figure": rel_fig,
                }
            )
            manifest["outputs"] += [rel_csv, rel_fig]
            echo(f"angles {left_name} & {right_name} {stats.mean:.4f} {stats.variance:.4f}")

    if cfg.eval_sets is not None:
        from .plots import plot_suite

        eval_dir = out_root / "eval"
        eval_dir.mkdir(exist_ok=True)
        names = cfg.eval_sets or list(loaded)
        eval_sets = [loaded[n] for n in names]
        sim_data = [load_similarity(p) for p in expand_dataset_paths(cfg.sim_paths)]
        ana_data = [load_analogy(p) for p in cfg.analogy_paths]
        reports = run_suite(eval_sets, sim_data, ana_data)
        csv_path = eval_dir / "results.csv"
        table_path = eval_dir / "results.txt"
        fig_path = eval_dir / "results.png"
        csv_path.write_text(suite_to_csv(reports), encoding="utf-8")
        table = format_suite_table(reports, eval_sets)
        table_path.write_text(table, encoding="utf-8")
        plot_suite(reports, fig_path)
        rels = [str(p.relative_to(out_root)) for p in (csv_path, table_path, fig_path)]
        manifest["evaluation"] = {
            "sets": names,
            "similarity": [str(p) for p in cfg.sim_paths],
            "analogy": [str(p) for p in cfg.analogy_paths],
            "csv": rels[0],
            "table": rels[1],
            "figure": rels[2],
        }
        manifest["outputs"] += rels
        echo(table.rstrip("\n"))

    manifest_path = out_root / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    echo(f"manifest written to {manifest_path}")
    return manifest
