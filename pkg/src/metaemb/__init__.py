"""Meta-embeddings from pre-trained word embedding sets.

Combine aligned embedding sets by word-wise averaging or concatenation,
measure the distribution of angles between cross-set difference vectors,
and evaluate any set on word-similarity and analogy benchmarks.
"""

__version__ = "0.1.0"

from .angles import AngleStats, export_histogram, sample_angles, variance_vs_dimension
from .combine import MetaRecipe, average, combine_k, concatenate
from .evaluation import (
    AnalogyDataset,
    EvalReport,
    SimilarityDataset,
    analogy_predictions,
    eval_analogy,
    eval_similarity,
    format_suite_table,
    load_analogy,
    load_similarity,
    run_suite,
    spearman,
    suite_to_csv,
)
from .formats import (
    load_native,
    load_text,
    load_word2vec_binary,
    save_native,
    save_text,
    save_word2vec_binary,
)
from .sets import AlignedPair, EmbeddingSet, intersect, shared_vocabulary
from .synthetic import multiscale_unit_set, random_unit_set
from .vecmath import (
    PadSpec,
    angle_between,
    cosine,
    euclidean,
    l2_normalize_vector,
    normalize_dimensions,
    normalize_vectors,
    pad,
    pad_set,
)

__all__ = [
    "AlignedPair",
    "AnalogyDataset",
    "AngleStats",
    "EmbeddingSet",
    "EvalReport",
    "MetaRecipe",
    "PadSpec",
    "SimilarityDataset",
    "analogy_predictions",
    "angle_between",
    "average",
    "combine_k",
    "concatenate",
    "cosine",
    "euclidean",
    "eval_analogy",
    "eval_similarity",
    "export_histogram",
    "format_suite_table",
    "intersect",
    "l2_normalize_vector",
    "load_analogy",
    "load_native",
    "load_similarity",
    "load_text",
    "load_word2vec_binary",
    "multiscale_unit_set",
    "normalize_dimensions",
    "normalize_vectors",
    "pad",
    "pad_set",
    "random_unit_set",
    "run_suite",
    "sample_angles",
    "save_native",
    "save_text",
    "save_word2vec_binary",
    "shared_vocabulary",
    "spearman",
    "suite_to_csv",
    "variance_vs_dimension",
]
