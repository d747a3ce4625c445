"""Build meta-embedding sets from aligned sources.

Two combination methods are provided. ``concatenate`` stacks each
token's source vectors into one longer vector, so pairwise distances in
the output are the root of the sum of squares of per-source distances.
``average`` takes the word-wise mean, keeping the dimension at the
largest source dimension (smaller sources are zero-padded first).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .sets import AlignedPair, EmbeddingSet, shared_vocabulary
from .vecmath import PAD_SIDES, PadSpec, pad_set

METHODS = ("average", "concatenate")

_METHOD_ALIASES = {"avg": "average", "average": "average", "concat": "concatenate", "concatenate": "concatenate"}


def canonical_method(method: str) -> str:
    """Map accepted method spellings ('avg', 'concat', ...) to canonical names."""
    try:
        return _METHOD_ALIASES[method]
    except KeyError:
        raise ValueError(f"unknown combination method {method!r}; expected one of {sorted(_METHOD_ALIASES)}") from None


@dataclass(frozen=True)
class MetaRecipe:
    """Declarative description of one combination.

    ``sources`` are set names, at least two, all distinct. When
    averaging sources of unequal dimension, ``pad_to_common_dim`` must
    be set and ``pad_sides`` gives the zero-padding side per source
    (default rear for all).
    """

    method: str
    sources: tuple[str, ...]
    pad_to_common_dim: bool = False
    pad_sides: tuple[str, ...] | None = None
    post_normalize: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", canonical_method(self.method))
        object.__setattr__(self, "sources", tuple(self.sources))
        if len(self.sources) < 2:
            raise ValueError("a recipe needs at least two sources")
        if len(set(self.sources)) != len(self.sources):
            raise ValueError(f"recipe sources must be distinct, got {self.sources}")
        if self.pad_sides is not None:
            object.__setattr__(self, "pad_sides", tuple(self.pad_sides))
            if len(self.pad_sides) != len(self.sources):
                raise ValueError("pad_sides must list one side per source")
            for side in self.pad_sides:
                if side not in PAD_SIDES:
                    raise ValueError(f"pad side must be one of {PAD_SIDES}, got {side!r}")


def _finish(name: str, vocab: list[str], matrix: np.ndarray, post_normalize: bool) -> EmbeddingSet:
    if post_normalize:
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        if np.any(norms <= 0):
            raise ValueError("cannot post-normalize: combined set has a zero-norm row")
        matrix = matrix / norms
    return EmbeddingSet(name, vocab, matrix)


def concatenate(pair: AlignedPair, name: str | None = None, post_normalize: bool = False) -> EmbeddingSet:
    """Concatenate an aligned pair into a set of dimension d_left + d_right.

    Each output row holds the right-source entries followed by the
    left-source entries (the stacking produced by adding a front-padded
    left vector to a rear-padded right vector).
    """
    if len(pair) == 0:
        raise ValueError("cannot concatenate an empty aligned pair")
    matrix = np.hstack([pair.right.vectors, pair.left.vectors])
    out_name = name if name is not None else f"{pair.left.name}+{pair.right.name}"
    return _finish(out_name, pair.shared_vocab, matrix, post_normalize)


def average(
    pair: AlignedPair,
    name: str | None = None,
    pad_to_common_dim: bool = False,
    pad_sides: tuple[str, str] = ("rear", "rear"),
    post_normalize: bool = False,
) -> EmbeddingSet:
    """Word-wise mean of an aligned pair.

    Sources of unequal dimension require ``pad_to_common_dim``; each
    side is zero-padded up to the larger dimension on its declared side
    before averaging. The divisor is always the number of sources.
    """
    if len(pair) == 0:
        raise ValueError("cannot average an empty aligned pair")
    left, right = pair.left, pair.right
    if left.dim != right.dim:
        if not pad_to_common_dim:
            raise ValueError(
                f"dimension mismatch ({left.dim} vs {right.dim}); enable pad_to_common_dim"
            )
        target = max(left.dim, right.dim)
        left = pad_set(left, PadSpec(pad_sides[0], target - left.dim))
        right = pad_set(right, PadSpec(pad_sides[1], target - right.dim))
    matrix = (left.vectors + right.vectors) / 2.0
    out_name = name if name is not None else f"{pair.left.name}+{pair.right.name}"
    return _finish(out_name, pair.shared_vocab, matrix, post_normalize)


def combine_k(sets: Sequence[EmbeddingSet], recipe: MetaRecipe, name: str | None = None) -> EmbeddingSet:
    """Combine K >= 2 sets according to a recipe.

    The output vocabulary is the intersection of all source
    vocabularies, ordered as in the first recipe source. Averaging
    divides by K after any padding; concatenation stacks blocks with the
    last recipe source first, so K=2 reduces exactly to
    :func:`concatenate`.
    """
    by_name = {s.name: s for s in sets}
    missing = [n for n in recipe.sources if n not in by_name]
    if missing:
        raise ValueError(f"recipe references unknown sets: {missing}")
    ordered = [by_name[n] for n in recipe.sources]
    vocab = shared_vocabulary(ordered)
    if not vocab:
        raise ValueError("sources share no vocabulary")
    aligned = [s.vectors[s.rows_for(vocab)] for s in ordered]
    out_name = name if name is not None else "+".join(recipe.sources)

    if recipe.method == "concatenate":
        matrix = np.hstack(aligned[::-1])
        return _finish(out_name, vocab, matrix, recipe.post_normalize)

    dims = [m.shape[1] for m in aligned]
    target = max(dims)
    if len(set(dims)) > 1:
        if not recipe.pad_to_common_dim:
            raise ValueError(f"dimension mismatch {dims}; enable pad_to_common_dim")
        sides = recipe.pad_sides or ("rear",) * len(aligned)
        padded = []
        for m, side in zip(aligned, sides):
            extra = np.zeros((m.shape[0], target - m.shape[1]))
            padded.append(np.hstack([extra, m]) if side == "front" else np.hstack([m, extra]))
        aligned = padded
    matrix = sum(aligned) / float(len(aligned))
    return _finish(out_name, vocab, matrix, recipe.post_normalize)
