"""Feature-set + model pipelines shared by the CV driver and the CLI.

A pipeline names one column of the experiment matrix: which features are
extracted and which classifier consumes them.  Feature sets:

* ``handcrafted``                       12/16-dim ordered vectors
* ``bow``                               L2-normalized TF-IDF
* ``handcrafted+bow``                   sparse concatenation
* ``word-embeddings``                   mean of pretrained word vectors
* ``sentence-vectors``                  frozen encoder vectors by record id
* ``handcrafted+sentence-vectors``      dense concatenation, or the two-branch
                                        hybrid head when the model is "hybrid"

The bag-of-words vocabulary is fit on the full corpus by default (the
evaluated-corpus reading); ``fold_safe=True`` refits it on the training
folds of each split instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from postsift import bow, embeddings, features, hybrid, models
from postsift.corpus import Dataset
from postsift.textproc import Lexicon, normalize, tokenize

FEATURE_SETS = (
    "handcrafted",
    "bow",
    "handcrafted+bow",
    "word-embeddings",
    "sentence-vectors",
    "handcrafted+sentence-vectors",
)

MODEL_ABBREV = {
    "logreg": "LR", "dtree": "DT", "rforest": "RF",
    "gnb": "NB", "mlp": "MLP", "linsvm": "SVM", "hybrid": "Hybrid",
}

HYBRID_KIND = "hybrid"


@dataclass(frozen=True)
class BowOptions:
    min_count: int = 5
    min_length: int = 2
    cap: int = 10000
    cap_mode: str = "occurrences"
    fold_safe: bool = False


@dataclass(frozen=True)
class Artifacts:
    """External resources a pipeline may need."""

    slang: Lexicon | None = None
    interjections: Lexicon | None = None
    word_vectors: embeddings.WordVectorTable | None = None
    sentence_vectors: embeddings.SentenceVectorTable | None = None
    bow_options: BowOptions = field(default_factory=BowOptions)


@dataclass
class Prepared:
    """Per-dataset matrices materialized once and sliced per fold."""

    y: np.ndarray
    tokens: list[list[str]] | None = None
    hand: np.ndarray | None = None
    emb: np.ndarray | None = None
    sent: np.ndarray | None = None
    vocab: bow.Vocabulary | None = None
    tfidf: sparse.csr_matrix | None = None


class Pipeline:
    """One (feature set, model) combination with its artifacts."""

    def __init__(self, feature_set: str, model_kind: str, artifacts: Artifacts,
                 model_spec: models.ModelSpec | None = None,
                 hybrid_config: hybrid.HybridConfig | None = None,
                 train_settings: hybrid.TrainSettings | None = None,
                 threads: int = 1):
        if feature_set not in FEATURE_SETS:
            raise ValueError(f"unknown feature set {feature_set!r}")
        if model_kind not in MODEL_ABBREV:
            raise ValueError(f"unknown model kind {model_kind!r}")
        if model_kind == HYBRID_KIND and feature_set != "handcrafted+sentence-vectors":
            raise ValueError(
                "the hybrid model requires the handcrafted+sentence-vectors "
                f"feature set, got {feature_set!r}")
        self.feature_set = feature_set
        self.model_kind = model_kind
        self.artifacts = artifacts
        self.model_spec = model_spec
        self.hybrid_config = hybrid_config
        self.train_settings = train_settings or hybrid.TrainSettings()
        self.threads = threads
        self._check_artifacts()

    def _check_artifacts(self) -> None:
        need_lex = "handcrafted" in self.feature_set
        if need_lex and (self.artifacts.slang is None
                         or self.artifacts.interjections is None):
            raise ValueError(f"feature set {self.feature_set!r} needs both lexicons")
        if self.feature_set == "word-embeddings" and self.artifacts.word_vectors is None:
            raise ValueError("word-embeddings feature set needs a word-vector table")
        if "sentence-vectors" in self.feature_set \
                and self.artifacts.sentence_vectors is None:
            raise ValueError(
                f"feature set {self.feature_set!r} needs a sentence-vector table")

    @property
    def name(self) -> str:
        return f"{self.feature_set}+{MODEL_ABBREV[self.model_kind]}"

    # -- materialization -------------------------------------------------

    def prepare(self, dataset: Dataset) -> Prepared:
        prepared = Prepared(y=dataset.labels())
        fs = self.feature_set
        if "handcrafted" in fs:
            prepared.hand = features.extract_matrix(
                dataset, self.artifacts.slang, self.artifacts.interjections)
        if "bow" in fs or fs == "word-embeddings":
            prepared.tokens = [tokenize(normalize(t)) for t in dataset.texts()]
        if "bow" in fs and not self.artifacts.bow_options.fold_safe:
            opts = self.artifacts.bow_options
            prepared.vocab = bow.build_vocab(
                prepared.tokens, min_count=opts.min_count,
                min_length=opts.min_length, cap=opts.cap, cap_mode=opts.cap_mode)
            prepared.tfidf = bow.transform_matrix(prepared.tokens, prepared.vocab)
        if fs == "word-embeddings":
            prepared.emb = np.vstack([
                embeddings.average_embed(toks, self.artifacts.word_vectors)
                for toks in prepared.tokens])
        if "sentence-vectors" in fs:
            prepared.sent = self.artifacts.sentence_vectors.matrix_for(dataset.ids())
        return prepared

    def _design_matrix(self, prepared: Prepared, train_idx: np.ndarray):
        """(X_train, X_eval_all) for classical models.

        X_eval_all covers every record so callers slice any eval subset;
        in fold-safe bow mode the vocabulary is refit on the training
        rows only.
        """
        fs = self.feature_set
        if fs == "handcrafted":
            return prepared.hand[train_idx], prepared.hand
        if fs == "word-embeddings":
            return prepared.emb[train_idx], prepared.emb
        if fs == "sentence-vectors":
            return prepared.sent[train_idx], prepared.sent
        if fs == "handcrafted+sentence-vectors":
            dense = np.hstack([prepared.hand, prepared.sent])
            return dense[train_idx], dense
        # bow and handcrafted+bow
        if self.artifacts.bow_options.fold_safe:
            opts = self.artifacts.bow_options
            vocab = bow.build_vocab(
                [prepared.tokens[i] for i in train_idx], min_count=opts.min_count,
                min_length=opts.min_length, cap=opts.cap, cap_mode=opts.cap_mode)
            tfidf = bow.transform_matrix(prepared.tokens, vocab)
        else:
            tfidf = prepared.tfidf
        if fs == "bow":
            return tfidf[train_idx], tfidf
        combined = sparse.hstack(
            [sparse.csr_matrix(prepared.hand), tfidf], format="csr")
        return combined[train_idx], combined

    # -- fold execution ---------------------------------------------------

    def run_fold(self, prepared: Prepared, train_idx: np.ndarray,
                 eval_idx: np.ndarray) -> np.ndarray:
        """Train on the training rows, return int labels for the eval rows."""
        y = prepared.y
        if self.model_kind == HYBRID_KIND:
            scaler = models.Standardizer.fit(prepared.hand[train_idx])
            H = scaler.transform(prepared.hand)
            E = prepared.sent
            config = self.hybrid_config or hybrid.HybridConfig(
                d_h=H.shape[1], d_e=E.shape[1])
            class_idx = np.where(y == 1, hybrid.INFORMATIVE_CLASS,
                                 hybrid.NOT_INFORMATIVE_CLASS)
            params = hybrid.train_hybrid(
                config, self.train_settings, H[train_idx], E[train_idx],
                class_idx[train_idx])
            pred_idx = hybrid.predict_hybrid_batch(params, H[eval_idx], E[eval_idx])
            return np.where(pred_idx == hybrid.INFORMATIVE_CLASS, 1, 0)
        X_train, X_all = self._design_matrix(prepared, train_idx)
        model = models.train(self.model_spec, X_train, y[train_idx],
                             layout=self.layout_tag(prepared), threads=self.threads)
        return model.predict(X_all[eval_idx])

    def layout_tag(self, prepared: Prepared) -> str:
        """Feature layout recorded in saved models (extractor versioning)."""
        if self.feature_set == "handcrafted":
            return features.layout_tag(prepared.hand.shape[1])
        return f"{self.feature_set}/1"
