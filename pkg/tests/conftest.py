import numpy as np
import pytest

from metaemb import EmbeddingSet


@pytest.fixture
def make_set():
    """Factory for random Gaussian embedding sets with stable tokens."""

    def _make(name: str, size: int, dim: int, seed: int, scale: float = 1.0) -> EmbeddingSet:
        rng = np.random.default_rng(seed)
        vocab = [f"w{i:05d}" for i in range(size)]
        return EmbeddingSet(name, vocab, scale * rng.standard_normal((size, dim)))

    return _make


def pair_distances(matrix: np.ndarray, first: np.ndarray, second: np.ndarray, chunk: int = 20000) -> np.ndarray:
    """Row-wise distances between indexed rows, chunked to bound memory."""
    out = np.empty(len(first))
    for start in range(0, len(first), chunk):
        sl = slice(start, start + chunk)
        out[sl] = np.linalg.norm(matrix[first[sl]] - matrix[second[sl]], axis=1)
    return out


def draw_pairs(rng: np.random.Generator, size: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """n random (i, j) index pairs with i != j."""
    first = rng.integers(0, size, size=n)
    second = rng.integers(0, size - 1, size=n)
    second = second + (second >= first)
    return first, second
