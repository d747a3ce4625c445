"""Sampling the distribution of angles between cross-set difference vectors.

For a random token pair (u, v) drawn from the shared vocabulary of an
aligned pair of sets, the sampled quantity is the angle between
``left[u] - left[v]`` and ``right[v] - right[u]``. For independent
high-dimensional sets these angles cluster tightly around pi/2, with a
variance that shrinks as the dimension grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sets import AlignedPair, intersect
from .synthetic import random_unit_set
from .vecmath import ZERO_TOL

# Pairs processed per vectorized block; results do not depend on this.
_CHUNK = 32768

# PRNG used for all sampling; recorded so runs can be reproduced.
GENERATOR_NAME = "pcg64"


@dataclass(frozen=True)
class AngleStats:
    """Summary of one angle-sampling run.

    ``histogram`` rows are ``(bin_lower, bin_upper, density)`` over
    [0, pi]; densities integrate to 1 when multiplied by bin width.
    ``skipped`` counts sampled pairs whose difference vector on either
    side had (near-)zero norm. ``seed`` and ``generator`` identify the
    random stream for reproduction.
    """

    sample_count: int
    mean: float
    variance: float
    histogram: tuple[tuple[float, float, float], ...]
    seed: int
    skipped: int = 0
    generator: str = GENERATOR_NAME


def _draw_pairs(rng: np.random.Generator, vocab_size: int, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    first = rng.integers(0, vocab_size, size=n_pairs)
    second = rng.integers(0, vocab_size - 1, size=n_pairs)
    second = second + (second >= first)
    return first, second


def _draw_unique_pairs(rng: np.random.Generator, vocab_size: int, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    limit = vocab_size * (vocab_size - 1) // 2
    if n_pairs > limit:
        raise ValueError(f"cannot draw {n_pairs} distinct unordered pairs from {vocab_size} tokens")
    chosen: dict[tuple[int, int], None] = {}
    while len(chosen) < n_pairs:
        a, b = _draw_pairs(rng, vocab_size, n_pairs - len(chosen))
        for u, v in zip(a.tolist(), b.tolist()):
            key = (u, v) if u < v else (v, u)
            if key not in chosen:
                chosen[key] = None
                if len(chosen) == n_pairs:
                    break
    firsts = np.fromiter((k[0] for k in chosen), dtype=np.intp, count=n_pairs)
    seconds = np.fromiter((k[1] for k in chosen), dtype=np.intp, count=n_pairs)
    return firsts, seconds


def sample_angles(
    pair: AlignedPair,
    n_pairs: int,
    seed: int,
    bins: int = 100,
    unique_pairs: bool = False,
) -> AngleStats:
    """Sample difference-vector angles for random token pairs.

    Draws ``n_pairs`` token pairs (u != v) uniformly, with replacement
    across pairs by default (``unique_pairs=True`` rejects repeats).
    Returns the sample mean, unbiased variance, and a ``bins``-bin
    density histogram over [0, pi]. Deterministic: the same pair,
    ``n_pairs`` and ``seed`` reproduce the result bit for bit.
    """
    vocab_size = len(pair)
    if vocab_size < 2:
        raise ValueError("angle sampling needs a shared vocabulary of at least 2 tokens")
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    if pair.left.dim != pair.right.dim:
        raise ValueError(
            f"angle sampling needs equal dimensions, got {pair.left.dim} and {pair.right.dim}; pad first"
        )
    rng = np.random.default_rng(seed)
    draw = _draw_unique_pairs if unique_pairs else _draw_pairs
    first, second = draw(rng, vocab_size, n_pairs)

    left = pair.left.vectors
    right = pair.right.vectors
    angles = np.empty(n_pairs)
    valid = np.empty(n_pairs, dtype=bool)
    for start in range(0, n_pairs, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n_pairs))
        d_left = left[first[sl]] - left[second[sl]]
        d_right = right[second[sl]] - right[first[sl]]
        # squared norms through the same accumulation as the dot product,
        # so exactly (anti)parallel differences give cos of exactly +-1
        sq_left = np.einsum("ij,ij->i", d_left, d_left)
        sq_right = np.einsum("ij,ij->i", d_right, d_right)
        ok = (sq_left > ZERO_TOL**2) & (sq_right > ZERO_TOL**2)
        dots = np.einsum("ij,ij->i", d_left, d_right)
        cos = np.zeros_like(dots)
        np.divide(dots, np.sqrt(sq_left * sq_right), out=cos, where=ok)
        angles[sl] = np.arccos(np.clip(cos, -1.0, 1.0))
        valid[sl] = ok

    kept = angles[valid]
    if kept.size == 0:
        raise ValueError("every sampled pair had a degenerate difference vector")
    mean = float(kept.mean())
    variance = float(kept.var(ddof=1)) if kept.size > 1 else 0.0
    densities, edges = np.histogram(kept, bins=bins, range=(0.0, math.pi), density=True)
    histogram = tuple(
        (float(edges[i]), float(edges[i + 1]), float(densities[i])) for i in range(bins)
    )
    return AngleStats(
        sample_count=int(kept.size),
        mean=mean,
        variance=variance,
        histogram=histogram,
        seed=int(seed),
        skipped=int(n_pairs - kept.size),
    )


def variance_vs_dimension(
    dims: list[int],
    vocab_size: int,
    n_pairs: int,
    seed: int,
) -> list[tuple[int, AngleStats]]:
    """Angle statistics for synthetic pairs across dimensions.

    For each dimension, two independent sets of ``vocab_size``
    unit-normalized standard-Gaussian vectors are generated and sampled
    with :func:`sample_angles`. Per-dimension seeds are derived
    deterministically from ``seed``. The result is ordered by dimension.
    """
    for d in dims:
        if d < 2:
            raise ValueError(f"dimension must be at least 2, got {d}")
    results = []
    for d in sorted(dims):
        left_seq, right_seq, pair_seq = np.random.SeedSequence([int(seed), int(d)]).spawn(3)
        left = random_unit_set(f"synthetic{d}a", vocab_size, d, left_seq)
        right = random_unit_set(f"synthetic{d}b", vocab_size, d, right_seq)
        pair_seed = int(pair_seq.generate_state(1)[0])
        results.append((d, sample_angles(intersect(left, right), n_pairs, pair_seed)))
    return results


def export_histogram(stats: AngleStats, path) -> None:
    """Write histogram data as CSV with a summary comment line.

    Layout: one ``#`` comment carrying n/mean/var/seed, the header
    ``bin_lower,bin_upper,density``, then one row per bin. Identical
    stats produce byte-identical files.
    """
    lines = [
        f"# n={stats.sample_count} mean={stats.mean!r} var={stats.variance!r} seed={stats.seed}",
        "bin_lower,bin_upper,density",
    ]
    for lower, upper, density in stats.histogram:
        lines.append(f"{lower!r},{upper!r},{density!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
