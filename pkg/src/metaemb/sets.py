"""Embedding set containers and vocabulary alignment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass
class EmbeddingSet:
    """A named vocabulary with one dense row vector per token.

    Parameters
    ----------
    name : str
        Identifier for the set, used in reports and recipes.
    vocab : list of str
        Tokens in storage order. Must contain no duplicates.
    vectors : numpy array
        Matrix of shape ``(len(vocab), dim)``. Stored as float64 and
        marked read-only; the instance takes ownership of the array.

    Instances are immutable after construction and safe to share across
    threads for read-only access.
    """

    name: str
    vocab: list[str]
    vectors: np.ndarray
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.vocab = list(self.vocab)
        matrix = np.ascontiguousarray(self.vectors, dtype=np.float64)
        if matrix.ndim != 2:
            raise ValueError(
                f"{self.name!r}: vector matrix must be 2-dimensional, got {matrix.ndim}"
            )
        if matrix.shape[0] != len(self.vocab):
            raise ValueError(
                f"{self.name!r}: {len(self.vocab)} tokens but {matrix.shape[0]} matrix rows"
            )
        if matrix.shape[1] < 1:
            raise ValueError(f"{self.name!r}: dimension must be at least 1")
        if not np.isfinite(matrix).all():
            raise ValueError(f"{self.name!r}: matrix contains NaN or Inf entries")
        self._index = {}
        for pos, token in enumerate(self.vocab):
            if token in self._index:
                raise ValueError(f"{self.name!r}: duplicate token {token!r}")
            self._index[token] = pos
        matrix.setflags(write=False)
        self.vectors = matrix

    @property
    def dim(self) -> int:
        """Number of entries in each row vector."""
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def index(self, token: str) -> int:
        """Row position of ``token``; raises KeyError if absent."""
        return self._index[token]

    def row(self, token: str) -> np.ndarray:
        """The vector stored for ``token``."""
        return self.vectors[self._index[token]]

    def rows_for(self, tokens: Sequence[str]) -> np.ndarray:
        """Row positions for a sequence of tokens, as an int array."""
        return np.fromiter((self._index[t] for t in tokens), dtype=np.intp, count=len(tokens))


@dataclass
class AlignedPair:
    """Two embedding sets restricted and row-aligned to a common vocabulary.

    ``left.vocab``, ``right.vocab`` and ``shared_vocab`` hold the same
    tokens in the same order.
    """

    left: EmbeddingSet
    right: EmbeddingSet
    shared_vocab: list[str]

    def __post_init__(self) -> None:
        self.shared_vocab = list(self.shared_vocab)
        if self.left.vocab != self.shared_vocab or self.right.vocab != self.shared_vocab:
            raise ValueError("aligned pair sides must list the shared vocabulary in order")

    def __len__(self) -> int:
        return len(self.shared_vocab)


def intersect(a: EmbeddingSet, b: EmbeddingSet) -> AlignedPair:
    """Restrict two sets to their common vocabulary, row-aligned.

    The shared vocabulary keeps the token order of ``a``. An empty
    intersection yields a valid pair of size 0; callers that need
    tokens must check ``len()`` themselves.
    """
    b_tokens = set(b.vocab)
    shared = [t for t in a.vocab if t in b_tokens]
    left = EmbeddingSet(a.name, shared, a.vectors[a.rows_for(shared)] if shared else np.empty((0, a.dim)))
    right = EmbeddingSet(b.name, shared, b.vectors[b.rows_for(shared)] if shared else np.empty((0, b.dim)))
    return AlignedPair(left=left, right=right, shared_vocab=shared)


def shared_vocabulary(sets: Sequence[EmbeddingSet]) -> list[str]:
    """Tokens present in every set, ordered as in the first set."""
    if not sets:
        return []
    common = set(sets[0].vocab)
    for other in sets[1:]:
        common &= set(other.vocab)
    return [t for t in sets[0].vocab if t in common]
