import math
from collections import Counter

import numpy as np
import pytest

from postsift.bow import (
    EmptyVocabularyError,
    build_vocab,
    load_vocab,
    save_vocab,
    smoothed_idf,
    tfidf_transform,
    transform_matrix,
)
from postsift.textproc import normalize, tokenize

from helpers import PKG_DATA


def brute_force_vocab(docs, min_count, min_length, cap):
    """Independent recount used as the oracle for build_vocab."""
    total = Counter()
    df = Counter()
    for doc in docs:
        total.update(doc)
        for term in set(doc):
            df[term] += 1
    kept = sorted(t for t, c in total.items()
                  if len(t) >= min_length and min_count <= c <= cap)
    n = len(docs)
    idf = {t: math.log((1 + n) / (1 + df[t])) + 1.0 for t in kept}
    return kept, {t: df[t] for t in kept}, idf


def brute_force_tfidf(doc, kept, idf):
    counts = Counter(t for t in doc if t in set(kept))
    raw = {t: counts[t] * idf[t] for t in counts}
    norm = math.sqrt(sum(w * w for w in raw.values()))
    if norm == 0:
        return {}
    return {t: w / norm for t, w in raw.items()}


@pytest.fixture()
def toy_docs():
    lines = (PKG_DATA / "toy_corpus.tsv").read_text().splitlines()[1:]
    return [tokenize(normalize(line.split("\t")[1])) for line in lines if line]


class TestBuildVocab:
    def test_length_pruning(self):
        docs = [["fire", "a"] for _ in range(5)] + [["a"] for _ in range(45)]
        vocab = build_vocab(docs)
        assert "fire" in vocab
        assert "a" not in vocab

    def test_min_count_pruning(self):
        docs = [["rare"]] * 4 + [["common"]] * 5
        vocab = build_vocab(docs)
        assert "rare" not in vocab
        assert "common" in vocab

    def test_occurrence_cap(self, toy_docs):
        vocab = build_vocab(toy_docs, cap=8)
        assert "spam" not in vocab  # 9 occurrences > cap
        assert set(vocab.terms) == {"fire", "water"}

    def test_vocab_size_cap_mode(self, toy_docs):
        vocab = build_vocab(toy_docs, cap=1, cap_mode="vocab")
        assert len(vocab) == 1
        assert vocab.terms == ("spam",)  # most frequent surviving term

    def test_toy_corpus_against_oracle(self, toy_docs):
        vocab = build_vocab(toy_docs)
        kept, df, idf = brute_force_vocab(toy_docs, 5, 2, 10000)
        assert list(vocab.terms) == kept
        for i, term in enumerate(vocab.terms):
            assert vocab.df[i] == df[term]
            assert abs(vocab.idf[i] - idf[term]) <= 1e-12

    def test_all_pruned(self):
        with pytest.raises(EmptyVocabularyError):
            build_vocab([["a", "b"], ["c"]])

    def test_order_insensitive(self, toy_docs):
        forward = build_vocab(toy_docs)
        backward = build_vocab(list(reversed(toy_docs)))
        assert forward.terms == backward.terms
        assert np.array_equal(forward.idf, backward.idf)

    def test_idf_positive(self, toy_docs):
        vocab = build_vocab(toy_docs)
        assert np.all(vocab.idf > 0)
        assert smoothed_idf(len(toy_docs), len(toy_docs)) > 0


class TestTfidfTransform:
    def test_all_oov(self, toy_docs):
        vocab = build_vocab(toy_docs)
        vec = tfidf_transform(["unknown", "tokens"], vocab)
        assert vec.indices == ()
        assert vec.norm() == 0.0

    def test_single_term_normalizes_to_one(self, toy_docs):
        vocab = build_vocab(toy_docs)
        vec = tfidf_transform(["fire", "fire", "fire"], vocab)
        assert len(vec.indices) == 1
        assert vec.weights[0] == pytest.approx(1.0, abs=1e-12)

    def test_document_against_oracle(self, toy_docs):
        vocab = build_vocab(toy_docs)
        kept, _, idf = brute_force_vocab(toy_docs, 5, 2, 10000)
        doc = toy_docs[2]
        vec = tfidf_transform(doc, vocab)
        want = brute_force_tfidf(doc, kept, idf)
        got = {vocab.terms[i]: w for i, w in zip(vec.indices, vec.weights)}
        assert set(got) == set(want)
        for term, weight in want.items():
            assert abs(got[term] - weight) <= 1e-9

    def test_unit_norm_property(self, toy_docs):
        vocab = build_vocab(toy_docs)
        for doc in toy_docs:
            vec = tfidf_transform(doc, vocab)
            if vec.indices:
                assert abs(vec.norm() - 1.0) <= 1e-9
                assert list(vec.indices) == sorted(vec.indices)

    def test_nnz_bound(self, toy_docs):
        vocab = build_vocab(toy_docs)
        for doc in toy_docs:
            vec = tfidf_transform(doc, vocab)
            in_vocab = {t for t in doc if t in vocab}
            assert len(vec.indices) <= len(in_vocab)

    def test_matrix_matches_vectors(self, toy_docs):
        vocab = build_vocab(toy_docs)
        matrix = transform_matrix(toy_docs, vocab)
        assert matrix.shape == (len(toy_docs), len(vocab))
        for i, doc in enumerate(toy_docs):
            vec = tfidf_transform(doc, vocab)
            row = matrix.getrow(i)
            assert list(row.indices) == list(vec.indices)
            assert np.allclose(row.data, vec.weights)


class TestVocabSerialization:
    def test_round_trip(self, toy_docs, tmp_path):
        vocab = build_vocab(toy_docs)
        path = tmp_path / "vocab.tsv"
        save_vocab(path, vocab)
        assert path.read_text().startswith(f"#docs={len(toy_docs)}\n")
        loaded = load_vocab(path)
        assert loaded.terms == vocab.terms
        assert np.array_equal(loaded.df, vocab.df)
        assert np.array_equal(loaded.idf, vocab.idf)
        assert loaded.corpus_size == vocab.corpus_size

    def test_bad_header(self, tmp_path):
        path = tmp_path / "vocab.tsv"
        path.write_text("not a header\n")
        with pytest.raises(ValueError, match="#docs"):
            load_vocab(path)
