"""Pretrained vector tables and mean-of-word-vectors post embeddings.

Two text formats live here:

* word vectors: one ``term f1 .. fd`` line per term (the layout of the
  published pretrained-vector releases);
* sentence vectors: the interchange format produced by the encoder
  export tool -- line 1 is ``#dim=D count=N``, any further ``#`` lines
  are comments, and each row is ``id<TAB>f1 f2 .. fD`` with
  6-significant-digit floats, LF line endings.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


class VectorFileError(ValueError):
    """A vector file is malformed; the message names the offending line."""


class WordVectorTable:
    """term -> dense vector, uniform dimension."""

    def __init__(self, vectors: Mapping[str, np.ndarray], dimension: int):
        self._vectors = dict(vectors)
        self.dimension = dimension

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, term: str) -> bool:
        return term in self._vectors

    def get(self, term: str) -> np.ndarray | None:
        return self._vectors.get(term)


class SentenceVectorTable:
    """record id -> dense vector, uniform dimension."""

    def __init__(self, vectors: Mapping[str, np.ndarray], dimension: int):
        self._vectors = dict(vectors)
        self.dimension = dimension

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, rec_id: str) -> bool:
        return rec_id in self._vectors

    def get(self, rec_id: str) -> np.ndarray | None:
        return self._vectors.get(rec_id)

    def matrix_for(self, ids: Sequence[str]) -> np.ndarray:
        """Dense (len(ids), d) matrix; raises on any missing id."""
        rows = []
        for rec_id in ids:
            vec = self._vectors.get(rec_id)
            if vec is None:
                raise KeyError(f"no sentence vector for record id {rec_id!r}")
            rows.append(vec)
        return np.vstack(rows) if rows else np.empty((0, self.dimension))


def load_word_vectors(path: str | Path) -> WordVectorTable:
    """Parse a word-vector text file; malformed lines fail with line numbers."""
    vectors: dict[str, np.ndarray] = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            term, cells = parts[0], parts[1:]
            if not cells:
                raise VectorFileError(f"{path}:{lineno}: no vector values")
            if dimension is None:
                dimension = len(cells)
            elif len(cells) != dimension:
                raise VectorFileError(
                    f"{path}:{lineno}: expected {dimension} values, got {len(cells)}")
            if term in vectors:
                raise VectorFileError(f"{path}:{lineno}: duplicate term {term!r}")
            try:
                vectors[term] = np.array([float(c) for c in cells], dtype=np.float64)
            except ValueError:
                raise VectorFileError(
                    f"{path}:{lineno}: non-numeric vector value") from None
    if dimension is None:
        raise VectorFileError(f"{path}: file contains no vectors")
    return WordVectorTable(vectors, dimension)


def average_embed(tokens: Iterable[str], table: WordVectorTable) -> np.ndarray:
    """Mean of the vectors of the tokens present in the table.

    Out-of-vocabulary tokens are skipped; if nothing is found the zero
    vector of the table's dimension is returned.
    """
    found = [table.get(tok) for tok in tokens]
    found = [v for v in found if v is not None]
    if not found:
        return np.zeros(table.dimension, dtype=np.float64)
    return np.mean(found, axis=0)


def _parse_header(line: str, path: Path) -> tuple[int, int]:
    parts = line.strip().split()
    ok = (len(parts) == 2 and parts[0].startswith("#dim=")
          and parts[1].startswith("count="))
    if not ok:
        raise VectorFileError(
            f"{path}:1: expected header '#dim=D count=N', got {line.strip()!r}")
    return int(parts[0][len("#dim="):]), int(parts[1][len("count="):])


def load_sentence_vectors(path: str | Path) -> SentenceVectorTable:
    """Parse the sentence-vector interchange format."""
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first:
            raise VectorFileError(f"{path}: empty file")
        dimension, count = _parse_header(first, path)
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                continue
            rec_id, sep, rest = line.partition("\t")
            if not sep or not rec_id:
                raise VectorFileError(
                    f"{path}:{lineno}: expected 'id<TAB>values' row")
            cells = rest.split()
            if len(cells) != dimension:
                raise VectorFileError(
                    f"{path}:{lineno}: row {rec_id!r} has {len(cells)} values, "
                    f"header declares dim={dimension}")
            if rec_id in vectors:
                raise VectorFileError(
                    f"{path}:{lineno}: duplicate id {rec_id!r}")
            try:
                vectors[rec_id] = np.array([float(c) for c in cells],
                                           dtype=np.float64)
            except ValueError:
                raise VectorFileError(
                    f"{path}:{lineno}: non-numeric value in row {rec_id!r}") from None
    if len(vectors) != count:
        raise VectorFileError(
            f"{path}: header declares count={count} but file has {len(vectors)} rows")
    return SentenceVectorTable(vectors, dimension)


def write_sentence_vectors(path: str | Path, items: Sequence[tuple[str, np.ndarray]],
                           dimension: int, comments: Sequence[str] = ()) -> None:
    """Write the interchange format (UTF-8, LF, 6-significant-digit floats)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#dim={dimension} count={len(items)}\n")
        for comment in comments:
            fh.write(f"#{comment}\n")
        for rec_id, vec in items:
            if len(vec) != dimension:
                raise ValueError(
                    f"vector for {rec_id!r} has dim {len(vec)}, expected {dimension}")
            fh.write(rec_id + "\t" + " ".join(format(v, ".6g") for v in vec) + "\n")
