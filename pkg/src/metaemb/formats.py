"""Readers and writers for embedding interchange formats.

Three formats are supported:

text
    UTF-8, one record per line: a token followed by ``dim``
    whitespace-separated decimal numbers. The dimension is fixed by the
    first record.

word2vec binary
    ASCII header ``"<count> <dim>\\n"``, then ``count`` records, each a
    space-terminated token followed by ``dim`` little-endian float32
    values. Newlines padding the start of a token (as written by common
    tools) are skipped on read.

native container
    Magic ``MEB1``, u32 version, u32 dim, u64 count, then ``count``
    tokens (u32 byte length + UTF-8 bytes), then the row-major
    count x dim matrix as little-endian float64. All integers
    little-endian. Lossless for float64 data.

Values from every source are stored as float64. Duplicate tokens keep
their first occurrence; the number dropped is logged as a warning.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path
from typing import Callable

import numpy as np

from .sets import EmbeddingSet

logger = logging.getLogger(__name__)

NATIVE_MAGIC = b"MEB1"
NATIVE_VERSION = 1

TokenFilter = Callable[[str], bool]


def _default_name(path: str | Path, name: str | None) -> str:
    return name if name is not None else Path(path).stem


def load_text(
    path: str | Path,
    name: str | None = None,
    token_filter: TokenFilter | None = None,
) -> EmbeddingSet:
    """Read a text-format embedding file.

    Parameters
    ----------
    path : str or Path
        File to read.
    name : str, optional
        Set name; defaults to the file stem.
    token_filter : callable, optional
        Predicate on tokens; records whose token returns False are
        dropped before duplicate handling.
    """
    tokens: list[str] = []
    rows: list[np.ndarray] = []
    seen: dict[str, int] = {}
    duplicates = 0
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            fields = line.split()
            if not fields:
                continue
            token, values = fields[0], fields[1:]
            if not values:
                raise ValueError(f"{path}: line {line_no}: no vector values")
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise ValueError(
                    f"{path}: line {line_no}: expected {dim} values, got {len(values)}"
                )
            try:
                row = np.array([float(x) for x in values], dtype=np.float64)
            except ValueError as exc:
                raise ValueError(f"{path}: line {line_no}: non-numeric field ({exc})") from None
            if token_filter is not None and not token_filter(token):
                continue
            if token in seen:
                duplicates += 1
                continue
            seen[token] = len(tokens)
            tokens.append(token)
            rows.append(row)
    if dim is None:
        raise ValueError(f"{path}: empty embedding file")
    if duplicates:
        logger.warning("%s: dropped %d duplicate token(s), first occurrence kept", path, duplicates)
    matrix = np.vstack(rows) if rows else np.empty((0, dim))
    return EmbeddingSet(_default_name(path, name), tokens, matrix)


def save_text(es: EmbeddingSet, path: str | Path) -> None:
    """Write a set in text format at full round-trip float precision."""
    with open(path, "w", encoding="utf-8") as handle:
        for token, row in zip(es.vocab, es.vectors):
            if len(token.split()) != 1:
                raise ValueError(f"token {token!r} contains whitespace; not representable in text format")
            handle.write(token)
            for value in row:
                handle.write(f" {float(value)!r}")
            handle.write("\n")


def load_word2vec_binary(
    path: str | Path,
    name: str | None = None,
    token_filter: TokenFilter | None = None,
) -> EmbeddingSet:
    """Read a word2vec-style binary embedding file."""
    with open(path, "rb") as handle:
        header = handle.readline()
        try:
            count_s, dim_s = header.split()
            count, dim = int(count_s), int(dim_s)
        except ValueError:
            raise ValueError(f"{path}: malformed header {header!r}") from None
        if dim <= 0:
            raise ValueError(f"{path}: dimension must be positive, got {dim}")
        if count < 0:
            raise ValueError(f"{path}: negative record count {count}")
        record_bytes = 4 * dim
        tokens: list[str] = []
        rows: list[np.ndarray] = []
        seen: dict[str, int] = {}
        duplicates = 0
        for rec in range(count):
            token_bytes = bytearray()
            while True:
                ch = handle.read(1)
                if not ch:
                    raise ValueError(f"{path}: truncated at record {rec} (expected {count})")
                if ch == b" ":
                    break
                if ch in (b"\n", b"\r") and not token_bytes:
                    continue
                token_bytes.extend(ch)
            raw = handle.read(record_bytes)
            if len(raw) != record_bytes:
                raise ValueError(f"{path}: truncated vector at record {rec} (expected {count})")
            token = token_bytes.decode("utf-8")
            row = np.frombuffer(raw, dtype="<f4").astype(np.float64)
            if token_filter is not None and not token_filter(token):
                continue
            if token in seen:
                duplicates += 1
                continue
            seen[token] = len(tokens)
            tokens.append(token)
            rows.append(row)
        trailing = handle.read()
    if trailing.strip(b"\r\n "):
        raise ValueError(f"{path}: {len(trailing)} unexpected bytes after {count} records")
    if duplicates:
        logger.warning("%s: dropped %d duplicate token(s), first occurrence kept", path, duplicates)
    matrix = np.vstack(rows) if rows else np.empty((0, dim))
    return EmbeddingSet(_default_name(path, name), tokens, matrix)


def save_word2vec_binary(es: EmbeddingSet, path: str | Path) -> None:
    """Write a set in word2vec binary format (values cast to float32)."""
    with open(path, "wb") as handle:
        handle.write(f"{len(es)} {es.dim}\n".encode("ascii"))
        for token, row in zip(es.vocab, es.vectors):
            if " " in token or "\n" in token or "\r" in token:
                raise ValueError(f"token {token!r} contains whitespace; not representable")
            handle.write(token.encode("utf-8"))
            handle.write(b" ")
            handle.write(row.astype("<f4").tobytes())


def save_native(es: EmbeddingSet, path: str | Path) -> None:
    """Write a set as a self-describing lossless binary container."""
    with open(path, "wb") as handle:
        handle.write(NATIVE_MAGIC)
        handle.write(struct.pack("<IIQ", NATIVE_VERSION, es.dim, len(es)))
        for token in es.vocab:
            encoded = token.encode("utf-8")
            handle.write(struct.pack("<I", len(encoded)))
            handle.write(encoded)
        handle.write(np.ascontiguousarray(es.vectors, dtype="<f8").tobytes())


def load_native(path: str | Path, name: str | None = None) -> EmbeddingSet:
    """Read a container written by :func:`save_native`."""
    with open(path, "rb") as handle:
        magic = handle.read(4)
        if magic != NATIVE_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        head = handle.read(16)
        if len(head) != 16:
            raise ValueError(f"{path}: truncated header")
        version, dim, count = struct.unpack("<IIQ", head)
        if version != NATIVE_VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        if dim <= 0:
            raise ValueError(f"{path}: dimension must be positive, got {dim}")
        tokens: list[str] = []
        for rec in range(count):
            raw_len = handle.read(4)
            if len(raw_len) != 4:
                raise ValueError(f"{path}: truncated token table at entry {rec}")
            (token_len,) = struct.unpack("<I", raw_len)
            raw = handle.read(token_len)
            if len(raw) != token_len:
                raise ValueError(f"{path}: truncated token at entry {rec}")
            tokens.append(raw.decode("utf-8"))
        expected = count * dim * 8
        raw_matrix = handle.read(expected)
        if len(raw_matrix) != expected:
            raise ValueError(f"{path}: truncated matrix (got {len(raw_matrix)} of {expected} bytes)")
        if handle.read(1):
            raise ValueError(f"{path}: unexpected bytes after matrix")
    matrix = np.frombuffer(raw_matrix, dtype="<f8").reshape(count, dim).copy()
    return EmbeddingSet(_default_name(path, name), tokens, matrix)


LOADERS = {
    "text": load_text,
    "word2vec": load_word2vec_binary,
    "native": load_native,
}
