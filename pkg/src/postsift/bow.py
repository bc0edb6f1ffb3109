"""Corpus vocabulary with frequency pruning and L2-normalized TF-IDF.

Pruning keeps terms of length >= 2 whose total corpus count lies in
[min_count, cap].  The cap defaults to the occurrence reading (a term
seen more than 10,000 times is dropped); ``cap_mode="vocab"`` instead
keeps the ``cap`` most frequent surviving terms.  Indices are assigned in
lexicographic term order so builds are independent of corpus order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse


class EmptyVocabularyError(ValueError):
    """Every candidate term was pruned."""


@dataclass(frozen=True)
class SparseVector:
    """(index, weight) pairs sorted by strictly increasing index."""

    indices: tuple[int, ...]
    weights: tuple[float, ...]
    dimension: int

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))


class Vocabulary:
    """Term index with document frequencies and smoothed idf weights."""

    def __init__(self, terms: Sequence[str], df: Sequence[int], idf: Sequence[float],
                 corpus_size: int):
        self.terms = tuple(terms)
        self.index = {t: i for i, t in enumerate(self.terms)}
        self.df = np.asarray(df, dtype=np.int64)
        self.idf = np.asarray(idf, dtype=np.float64)
        self.corpus_size = corpus_size

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


def smoothed_idf(df: int, corpus_size: int) -> float:
    """idf(t) = ln((1 + N) / (1 + df)) + 1; strictly positive."""
    return math.log((1 + corpus_size) / (1 + df)) + 1.0


def build_vocab(tokenized_corpus: Sequence[Sequence[str]], min_count: int = 5,
                min_length: int = 2, cap: int = 10000,
                cap_mode: str = "occurrences") -> Vocabulary:
    """Build the pruned vocabulary over a tokenized corpus.

    Raises EmptyVocabularyError when nothing survives pruning.
    """
    if not tokenized_corpus:
        raise ValueError("corpus is empty")
    if cap_mode not in ("occurrences", "vocab"):
        raise ValueError(f"cap_mode must be 'occurrences' or 'vocab', got {cap_mode!r}")
    total: Counter[str] = Counter()
    df: Counter[str] = Counter()
    for tokens in tokenized_corpus:
        total.update(tokens)
        df.update(set(tokens))
    kept = [t for t, c in total.items() if len(t) >= min_length and c >= min_count]
    if cap_mode == "occurrences":
        kept = [t for t in kept if total[t] <= cap]
    else:
        # Most frequent first; lexicographic among equal counts.
        kept.sort(key=lambda t: (-total[t], t))
        kept = kept[:cap]
    if not kept:
        raise EmptyVocabularyError(
            "no term survived pruning "
            f"(min_count={min_count}, min_length={min_length}, cap={cap})")
    kept.sort()
    n_docs = len(tokenized_corpus)
    idf = [smoothed_idf(df[t], n_docs) for t in kept]
    return Vocabulary(kept, [df[t] for t in kept], idf, n_docs)


def tfidf_transform(tokens: Sequence[str], vocab: Vocabulary) -> SparseVector:
    """L2-normalized tf*idf vector; out-of-vocabulary tokens are ignored.

    A document with no in-vocabulary tokens yields the zero vector.
    """
    counts: Counter[int] = Counter()
    for tok in tokens:
        idx = vocab.index.get(tok)
        if idx is not None:
            counts[idx] += 1
    if not counts:
        return SparseVector((), (), len(vocab))
    indices = sorted(counts)
    weights = np.array([counts[i] * vocab.idf[i] for i in indices], dtype=np.float64)
    weights /= np.linalg.norm(weights)
    return SparseVector(tuple(indices), tuple(weights), len(vocab))


def transform_matrix(tokenized_docs: Sequence[Sequence[str]],
                     vocab: Vocabulary) -> sparse.csr_matrix:
    """Stack tfidf_transform of every document into a CSR matrix."""
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for tokens in tokenized_docs:
        vec = tfidf_transform(tokens, vocab)
        indices.extend(vec.indices)
        data.extend(vec.weights)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64),
         np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(tokenized_docs), len(vocab)))


def save_vocab(path: str | Path, vocab: Vocabulary) -> None:
    """Write ``#docs=N`` header then one ``term TAB df TAB idf`` line per term."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#docs={vocab.corpus_size}\n")
        for term, df, idf in zip(vocab.terms, vocab.df, vocab.idf):
            fh.write(f"{term}\t{df}\t{format(idf, '.17g')}\n")


def load_vocab(path: str | Path) -> Vocabulary:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#docs="):
            raise ValueError(f"{path}: expected '#docs=N' header, got {header!r}")
        corpus_size = int(header[len("#docs="):])
        terms, dfs, idfs = [], [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'term<TAB>df<TAB>idf'")
            terms.append(parts[0])
            dfs.append(int(parts[1]))
            idfs.append(float(parts[2]))
    if not terms:
        raise EmptyVocabularyError(f"{path}: vocabulary file has no terms")
    return Vocabulary(terms, dfs, idfs, corpus_size)
