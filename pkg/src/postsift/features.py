"""Ordered handcrafted feature vectors: 12 text slots plus 4 user slots.

The slot order is frozen; models record the layout tag so a trained model
rejects matrices produced by a different extractor version.  Word-level
features (n_words, t_lex, lexicon flags) run on one shared token stream:
URL spans are stripped from the raw text, the remainder is normalized and
whitespace-tokenized.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import numpy as np

from postsift.corpus import Dataset, UserMeta
from postsift.textproc import (
    Lexicon,
    contains_lexicon_term,
    detect_patterns,
    normalize,
    strip_urls,
    tokenize,
)

TEXT_FEATURE_NAMES = (
    "n_chars", "n_words", "n_hashtags", "n_url", "n_at",
    "b_hashtag", "b_at", "b_rt", "b_slang", "b_url", "t_lex", "b_interj",
)
USER_FEATURE_NAMES = (
    "b_usr", "n_followers_log", "n_followees_log", "n_tweets_log",
)

TEXT_LAYOUT = "hc12/1"
FULL_LAYOUT = "hc16/1"


def layout_tag(dims: int) -> str:
    if dims == len(TEXT_FEATURE_NAMES):
        return TEXT_LAYOUT
    if dims == len(TEXT_FEATURE_NAMES) + len(USER_FEATURE_NAMES):
        return FULL_LAYOUT
    raise ValueError(f"no handcrafted layout with {dims} dims")


def feature_names(dims: int) -> tuple[str, ...]:
    layout_tag(dims)
    return (TEXT_FEATURE_NAMES + USER_FEATURE_NAMES)[:dims]


def text_features(raw: str, slang: Lexicon, interj: Lexicon) -> np.ndarray:
    """12-dim text feature block for one raw tweet.

    t_lex (distinct tokens / total tokens) is 0 by convention for tweets
    with no tokens.
    """
    patterns = detect_patterns(raw)
    tokens = tokenize(normalize(strip_urls(raw)))
    n_words = len(tokens)
    t_lex = len(set(tokens)) / n_words if n_words else 0.0
    return np.array([
        len(raw),
        n_words,
        patterns.hashtags,
        patterns.urls,
        patterns.mentions,
        1.0 if patterns.hashtags else 0.0,
        1.0 if patterns.mentions else 0.0,
        1.0 if patterns.is_retweet else 0.0,
        1.0 if contains_lexicon_term(tokens, slang) else 0.0,
        1.0 if patterns.urls else 0.0,
        t_lex,
        1.0 if contains_lexicon_term(tokens, interj) else 0.0,
    ], dtype=np.float64)


def user_features(meta: UserMeta) -> np.ndarray:
    """4-dim user block: verified flag and log10(count + 1) transforms."""
    return np.array([
        1.0 if meta.verified else 0.0,
        math.log10(meta.followers + 1),
        math.log10(meta.followees + 1),
        math.log10(meta.tweets_posted + 1),
    ], dtype=np.float64)


def assemble(text_block: np.ndarray, user_block: np.ndarray | None = None) -> np.ndarray:
    """Concatenate blocks in layout order (text first, user last)."""
    if text_block.shape != (len(TEXT_FEATURE_NAMES),):
        raise ValueError(f"text block must have {len(TEXT_FEATURE_NAMES)} dims")
    if user_block is None:
        return text_block
    if user_block.shape != (len(USER_FEATURE_NAMES),):
        raise ValueError(f"user block must have {len(USER_FEATURE_NAMES)} dims")
    return np.concatenate([text_block, user_block])


def stack(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Stack per-record vectors into one matrix, rejecting mixed dims."""
    if not vectors:
        raise ValueError("cannot stack an empty list of feature vectors")
    dims = {v.shape[0] for v in vectors}
    if len(dims) != 1:
        raise ValueError(
            "cannot mix records with and without user features in one "
            f"matrix (saw dims {sorted(dims)})")
    return np.vstack(vectors)


def extract_matrix(dataset: Dataset, slang: Lexicon, interj: Lexicon) -> np.ndarray:
    """Handcrafted matrix for a dataset: (n, 12) or (n, 16) with user meta."""
    rows = []
    for record in dataset.records:
        block = text_features(record.text, slang, interj)
        if dataset.has_user_meta:
            block = assemble(block, user_features(record.user))
        rows.append(block)
    return stack(rows)


def write_feature_matrix(path: str | Path, ids: Sequence[str],
                         matrix: np.ndarray) -> None:
    """Export a handcrafted matrix as TSV: id column, then layout order."""
    names = feature_names(matrix.shape[1])
    if len(ids) != matrix.shape[0]:
        raise ValueError("id count does not match matrix rows")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\t" + "\t".join(names) + "\n")
        for rec_id, row in zip(ids, matrix):
            cells = "\t".join(format(v, ".17g") for v in row)
            fh.write(f"{rec_id}\t{cells}\n")
