"""Benchmark evaluation: word similarity and word analogies.

Similarity benchmarks are scored by the Spearman rank correlation
between cosine similarities and human judgments. Analogy questions
"a is to b as c is to ?" are answered with the vector-offset rule:
the prediction is the vocabulary token (excluding a, b, c) whose
cosine with ``b - a + c`` is largest, found by exact brute-force scan.

Benchmark words absent from a set's vocabulary cannot be scored; such
pairs/questions are skipped and counted, so every report carries
``covered + skipped == dataset size``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .sets import EmbeddingSet
from .vecmath import ZERO_TOL

# Cap on scores-block size (elements) for the analogy scan.
_BLOCK_ELEMS = 16_777_216


@dataclass(frozen=True)
class SimilarityDataset:
    """Word pairs with human similarity scores."""

    name: str
    pairs: tuple[tuple[str, str, float], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ValueError(f"{self.name!r}: similarity dataset is empty")
        for w1, w2, score in self.pairs:
            if not math.isfinite(score):
                raise ValueError(f"{self.name!r}: non-finite score for ({w1!r}, {w2!r})")

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class AnalogyDataset:
    """Four-token analogy questions with one category label each."""

    name: str
    questions: tuple[tuple[str, str, str, str], ...]
    categories: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.questions:
            raise ValueError(f"{self.name!r}: analogy dataset is empty")
        if len(self.categories) != len(self.questions):
            raise ValueError(f"{self.name!r}: one category label per question required")
        for q in self.questions:
            if len(q) != 4 or not all(q):
                raise ValueError(f"{self.name!r}: malformed question {q!r}")

    def __len__(self) -> int:
        return len(self.questions)


@dataclass(frozen=True)
class EvalReport:
    """Score of one embedding set on one dataset.

    ``value`` is Spearman rho in [-1, 1] or accuracy in [0, 1]. A cell
    that could not be scored carries ``value=nan`` and the reason in
    ``error``.
    """

    set_name: str
    dataset: str
    metric: str
    value: float
    covered: int
    skipped: int
    error: str | None = None


def load_similarity(path: str | Path, name: str | None = None) -> SimilarityDataset:
    """Read a word-similarity file: word1, word2, score per row.

    The delimiter (tab or comma) is detected from the first data line;
    a leading header row is skipped when its score field is not
    numeric.
    """
    path = Path(path)
    rows: list[tuple[str, str, float]] = []
    with open(path, "r", encoding="utf-8") as handle:
        raw_lines = [ln.rstrip("\n").rstrip("\r") for ln in handle]
    lines = [(no, ln) for no, ln in enumerate(raw_lines, start=1) if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty dataset file")
    delimiter = "\t" if "\t" in lines[0][1] else ","
    for pos, (line_no, line) in enumerate(lines):
        fields = [f.strip() for f in line.split(delimiter)]
        if len(fields) != 3:
            raise ValueError(f"{path}: line {line_no}: expected 3 fields, got {len(fields)}")
        try:
            score = float(fields[2])
        except ValueError:
            if pos == 0:
                continue  # header row
            raise ValueError(f"{path}: line {line_no}: non-numeric score {fields[2]!r}") from None
        rows.append((fields[0], fields[1], score))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return SimilarityDataset(name if name is not None else path.stem, tuple(rows))


def load_analogy(path: str | Path, name: str | None = None) -> AnalogyDataset:
    """Read an analogy file: four whitespace-separated tokens per line,
    with ``: category`` lines starting a new question group."""
    path = Path(path)
    questions: list[tuple[str, str, str, str]] = []
    categories: list[str] = []
    current = ""
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if line.startswith(": "):
                current = line[2:].strip()
                continue
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 4:
                raise ValueError(f"{path}: line {line_no}: expected 4 tokens, got {len(fields)}")
            questions.append((fields[0], fields[1], fields[2], fields[3]))
            categories.append(current)
    if not questions:
        raise ValueError(f"{path}: no analogy questions")
    return AnalogyDataset(name if name is not None else path.stem, tuple(questions), tuple(categories))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    # Rank of v = (#smaller) + (#equal + 1)/2, i.e. fractional ranks for ties.
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    before = np.cumsum(counts) - counts
    return before[inverse] + (counts[inverse] + 1) / 2.0


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation with average-rank tie handling."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"inputs must be equal-length 1-d sequences, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    rank_x = _average_ranks(x)
    rank_y = _average_ranks(y)
    dev_x = rank_x - rank_x.mean()
    dev_y = rank_y - rank_y.mean()
    denom = math.sqrt(float(dev_x @ dev_x) * float(dev_y @ dev_y))
    if denom == 0.0:
        raise ValueError("rank correlation undefined for a constant sequence")
    return float(np.clip(float(dev_x @ dev_y) / denom, -1.0, 1.0))


def eval_similarity(es: EmbeddingSet, data: SimilarityDataset) -> EvalReport:
    """Spearman correlation of pair cosines against human scores."""
    idx1, idx2, human = [], [], []
    skipped = 0
    for w1, w2, score in data.pairs:
        if w1 in es and w2 in es:
            idx1.append(es.index(w1))
            idx2.append(es.index(w2))
            human.append(score)
        else:
            skipped += 1
    covered = len(human)
    if covered < 2:
        raise ValueError(f"{data.name!r}: only {covered} of {len(data)} pairs covered by {es.name!r}")
    a = es.vectors[np.array(idx1)]
    b = es.vectors[np.array(idx2)]
    norms = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    if np.any(norms <= ZERO_TOL):
        bad = int(np.flatnonzero(norms <= ZERO_TOL)[0])
        raise ValueError(f"{es.name!r}: zero-norm vector in pair {data.pairs[bad][:2]}")
    cosines = np.clip(np.einsum("ij,ij->i", a, b) / norms, -1.0, 1.0)
    rho = spearman(cosines, human)
    return EvalReport(es.name, data.name, "spearman", rho, covered, skipped)


def analogy_predictions(
    es: EmbeddingSet, data: AnalogyDataset, exclude_inputs: bool = True
) -> tuple[dict[int, str], int]:
    """Vector-offset prediction for every covered question.

    Candidates are ranked by cosine with ``b - a + c``; the three query
    tokens are excluded unless ``exclude_inputs=False``. Ties resolve
    to the lowest vocabulary index. The scan is exact (no approximate
    index), blocked over questions for throughput. Returns a mapping
    from question position to predicted token, plus the skipped count.
    """
    covered_idx = []
    skipped = 0
    for q_no, (a, b, c, d) in enumerate(data.questions):
        if a in es and b in es and c in es and d in es:
            covered_idx.append(q_no)
        else:
            skipped += 1
    if not covered_idx:
        return {}, skipped

    matrix = es.vectors
    norms = np.linalg.norm(matrix, axis=1)
    scorable = norms > ZERO_TOL
    candidates = np.zeros_like(matrix)
    np.divide(matrix, norms[:, None], out=candidates, where=scorable[:, None])

    quad = np.array(
        [[es.index(t) for t in data.questions[q]] for q in covered_idx], dtype=np.intp
    )
    a_i, b_i, c_i, _ = quad.T
    predicted: dict[int, str] = {}
    block = max(1, _BLOCK_ELEMS // max(1, len(es)))
    for start in range(0, len(quad), block):
        sl = slice(start, min(start + block, len(quad)))
        queries = matrix[b_i[sl]] - matrix[a_i[sl]] + matrix[c_i[sl]]
        scores = queries @ candidates.T
        scores[:, ~scorable] = -np.inf
        if exclude_inputs:
            rows = np.arange(scores.shape[0])
            scores[rows, a_i[sl]] = -np.inf
            scores[rows, b_i[sl]] = -np.inf
            scores[rows, c_i[sl]] = -np.inf
        winners = np.argmax(scores, axis=1)
        for offset, row in enumerate(winners):
            predicted[covered_idx[start + offset]] = es.vocab[int(row)]
    return predicted, skipped


def eval_analogy(es: EmbeddingSet, data: AnalogyDataset, exclude_inputs: bool = True) -> EvalReport:
    """Fraction of covered questions whose prediction matches the answer
    token exactly (see :func:`analogy_predictions` for the protocol)."""
    predicted, skipped = analogy_predictions(es, data, exclude_inputs)
    if not predicted:
        raise ValueError(f"{data.name!r}: no questions covered by {es.name!r}")
    correct = sum(1 for q_no, token in predicted.items() if token == data.questions[q_no][3])
    accuracy = correct / len(predicted)
    return EvalReport(es.name, data.name, "accuracy", accuracy, len(predicted), skipped)


def run_suite(
    sets: Sequence[EmbeddingSet],
    sim_data: Sequence[SimilarityDataset],
    ana_data: Sequence[AnalogyDataset] = (),
) -> list[EvalReport]:
    """Score every set on every dataset.

    Cells that cannot be scored (e.g. full OOV) are recorded with
    ``value=nan`` and the failure reason instead of aborting the suite.
    """
    if not sets or not (sim_data or ana_data):
        raise ValueError("need at least one set and one dataset")
    reports: list[EvalReport] = []
    for es in sets:
        for data in sim_data:
            try:
                reports.append(eval_similarity(es, data))
            except ValueError as exc:
                reports.append(EvalReport(es.name, data.name, "spearman", math.nan, 0, len(data), str(exc)))
        for data in ana_data:
            try:
                reports.append(eval_analogy(es, data))
            except ValueError as exc:
                reports.append(EvalReport(es.name, data.name, "accuracy", math.nan, 0, len(data), str(exc)))
    return reports


def _cell(value: float) -> str:
    return "" if math.isnan(value) else f"{value * 100:.1f}"


def suite_to_csv(reports: Sequence[EvalReport]) -> str:
    """CSV rendering of suite results; scores are reported x100."""
    lines = ["set,dataset,metric,value,covered,skipped"]
    for r in reports:
        lines.append(f"{r.set_name},{r.dataset},{r.metric},{_cell(r.value)},{r.covered},{r.skipped}")
    return "\n".join(lines) + "\n"


def format_suite_table(reports: Sequence[EvalReport], sets: Sequence[EmbeddingSet] = ()) -> str:
    """Aligned text table: one row per set, one column per dataset."""
    set_names: list[str] = []
    datasets: list[str] = []
    for r in reports:
        if r.set_name not in set_names:
            set_names.append(r.set_name)
        if r.dataset not in datasets:
            datasets.append(r.dataset)
    dims = {s.name: s.dim for s in sets}
    cells = {(r.set_name, r.dataset): ("--" if math.isnan(r.value) else f"{r.value * 100:.1f}") for r in reports}

    labels = [f"{n} {dims[n]}" if n in dims else n for n in set_names]
    label_width = max(len("Embeddings"), *(len(l) for l in labels))
    col_widths = [max(len(d), 5) for d in datasets]
    header = "Embeddings".ljust(label_width) + "".join(
        "  " + d.rjust(w) for d, w in zip(datasets, col_widths)
    )
    rows = [header]
    for name, label in zip(set_names, labels):
        row = label.ljust(label_width)
        for dataset, width in zip(datasets, col_widths):
            row += "  " + cells.get((name, dataset), "--").rjust(width)
        rows.append(row)
    return "\n".join(rows) + "\n"
