"""Normalization, zero-padding, and distance/angle geometry.

All operations are pure functions over immutable inputs and are safe to
call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sets import EmbeddingSet

# Norms at or below this are treated as zero.
ZERO_TOL = 1e-12

PAD_SIDES = ("front", "rear")


@dataclass(frozen=True)
class PadSpec:
    """Where and how many zero entries to insert into a vector."""

    side: str
    count: int

    def __post_init__(self) -> None:
        if self.side not in PAD_SIDES:
            raise ValueError(f"pad side must be one of {PAD_SIDES}, got {self.side!r}")
        if self.count < 0:
            raise ValueError(f"pad count must be non-negative, got {self.count}")


def l2_normalize_vector(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to unit Euclidean norm."""
    v = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm <= ZERO_TOL:
        raise ValueError(f"cannot normalize vector with norm {norm!r}")
    return v / norm


def normalize_vectors(es: EmbeddingSet) -> EmbeddingSet:
    """Scale every row of a set to unit norm.

    Raises ValueError naming the first token whose vector has
    (near-)zero norm.
    """
    norms = np.linalg.norm(es.vectors, axis=1)
    bad = np.flatnonzero(norms <= ZERO_TOL)
    if bad.size:
        raise ValueError(
            f"{es.name!r}: token {es.vocab[int(bad[0])]!r} has zero-norm vector"
        )
    return EmbeddingSet(es.name, es.vocab, es.vectors / norms[:, None])


def normalize_dimensions(es: EmbeddingSet) -> EmbeddingSet:
    """Scale every column to unit norm taken across the whole vocabulary.

    Raises ValueError naming the first dimension index whose column is
    (near-)zero.
    """
    norms = np.linalg.norm(es.vectors, axis=0)
    bad = np.flatnonzero(norms <= ZERO_TOL)
    if bad.size:
        raise ValueError(f"{es.name!r}: dimension {int(bad[0])} has zero norm")
    return EmbeddingSet(es.name, es.vocab, es.vectors / norms[None, :])


def pad(v: np.ndarray, spec: PadSpec) -> np.ndarray:
    """Extend a vector with ``spec.count`` zeros on ``spec.side``.

    Norm-preserving: the original entries stay contiguous.
    """
    v = np.asarray(v, dtype=np.float64)
    zeros = np.zeros(spec.count, dtype=np.float64)
    if spec.side == "front":
        return np.concatenate([zeros, v])
    return np.concatenate([v, zeros])


def pad_set(es: EmbeddingSet, spec: PadSpec) -> EmbeddingSet:
    """Apply the same zero-padding to every row of a set."""
    n = len(es)
    zeros = np.zeros((n, spec.count), dtype=np.float64)
    if spec.side == "front":
        matrix = np.hstack([zeros, es.vectors])
    else:
        matrix = np.hstack([es.vectors, zeros])
    return EmbeddingSet(es.name, es.vocab, matrix)


def _check_lengths(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return u, v


def euclidean(u: np.ndarray, v: np.ndarray) -> float:
    """Euclidean distance between two equal-length vectors."""
    u, v = _check_lengths(u, v)
    return float(np.linalg.norm(u - v))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] to absorb rounding.

    The denominator is the square root of the product of squared norms
    accumulated like the dot product, so exactly (anti)parallel inputs
    give exactly +-1.
    """
    u, v = _check_lengths(u, v)
    sq_u = float(np.dot(u, u))
    sq_v = float(np.dot(v, v))
    if sq_u <= ZERO_TOL**2 or sq_v <= ZERO_TOL**2:
        raise ValueError("cosine undefined for zero-norm vector")
    return float(np.clip(np.dot(u, v) / np.sqrt(sq_u * sq_v), -1.0, 1.0))


def angle_between(u: np.ndarray, v: np.ndarray) -> float:
    """Angle in radians between two vectors, in [0, pi]."""
    return float(np.arccos(cosine(u, v)))
