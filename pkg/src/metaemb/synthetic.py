"""Synthetic unit-vector sets for simulation and fixtures."""

from __future__ import annotations

import numpy as np

from .sets import EmbeddingSet


def _tokens(size: int) -> list[str]:
    return [f"w{i:06d}" for i in range(size)]


def random_unit_set(name: str, size: int, dim: int, seed) -> EmbeddingSet:
    """Independent standard-Gaussian vectors, each scaled to unit norm.

    Pair distances concentrate near sqrt(2) as ``dim`` grows; use
    :func:`multiscale_unit_set` when heterogeneous distances are needed.
    """
    rng = np.random.default_rng(seed)
    matrix = rng.standard_normal((size, dim))
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    return EmbeddingSet(name, _tokens(size), matrix)


def multiscale_unit_set(
    name: str,
    size: int,
    dim: int,
    seed,
    scale_lo: float = 0.002,
    scale_hi: float = 4.0,
) -> EmbeddingSet:
    """Unit vectors whose pairwise distances span many scales.

    Each point is scattered around a random anchor direction at an
    angular scale drawn log-uniformly from [scale_lo, scale_hi], giving
    near-duplicates, mid-range neighbours, and unrelated points in one
    cloud, while difference-vector directions still spread over all
    ``dim`` axes. This mimics the distance structure of trained
    embeddings better than an isotropic cloud, whose pair distances all
    concentrate at a single value.
    """
    rng = np.random.default_rng(seed)
    anchor = rng.standard_normal(dim)
    anchor /= np.linalg.norm(anchor)
    scales = np.exp(rng.uniform(np.log(scale_lo), np.log(scale_hi), size=size))
    matrix = anchor[None, :] + (scales[:, None] / np.sqrt(dim)) * rng.standard_normal((size, dim))
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    return EmbeddingSet(name, _tokens(size), matrix)
