import math

import numpy as np
import pytest

from postsift.corpus import ColumnSchema, LabelMap, UserMeta, load_dataset
from postsift.features import (
    TEXT_FEATURE_NAMES,
    USER_FEATURE_NAMES,
    assemble,
    extract_matrix,
    feature_names,
    layout_tag,
    stack,
    text_features,
    user_features,
    write_feature_matrix,
)

from helpers import DATA_DIR, read_tsv

IDX = {name: i for i, name in enumerate(TEXT_FEATURE_NAMES)}


class TestTextFeatures:
    def test_spec_example(self, empty_slang, empty_interj):
        v = text_features("RT @a: #flood http://x.co now", empty_slang, empty_interj)
        assert v[IDX["n_chars"]] == 29
        assert v[IDX["n_hashtags"]] == 1
        assert v[IDX["n_url"]] == 1
        assert v[IDX["n_at"]] == 1
        for flag in ("b_hashtag", "b_at", "b_rt", "b_url"):
            assert v[IDX[flag]] == 1.0
        assert v[IDX["b_slang"]] == 0.0
        assert v[IDX["b_interj"]] == 0.0

    def test_lexical_diversity(self, empty_slang, empty_interj):
        v = text_features("fire fire help", empty_slang, empty_interj)
        assert v[IDX["n_words"]] == 3
        assert v[IDX["t_lex"]] == 2 / 3

    def test_empty_tweet_convention(self, empty_slang, empty_interj):
        v = text_features("", empty_slang, empty_interj)
        assert np.all(v == 0.0)

    def test_binary_flags_follow_counts(self, empty_slang, empty_interj):
        rng = np.random.default_rng(11)
        pieces = ["#tag", "@user", "http://u.rl", "word", "rt", "!!!", "2024"]
        for _ in range(200):
            raw = " ".join(rng.choice(pieces, size=rng.integers(0, 8)))
            v = text_features(raw, empty_slang, empty_interj)
            assert (v[IDX["b_hashtag"]] == 1.0) == (v[IDX["n_hashtags"]] >= 1)
            assert (v[IDX["b_at"]] == 1.0) == (v[IDX["n_at"]] >= 1)
            assert (v[IDX["b_url"]] == 1.0) == (v[IDX["n_url"]] >= 1)
            assert 0.0 <= v[IDX["t_lex"]] <= 1.0

    def test_deterministic(self, fixture_slang, fixture_interj):
        raw = "omg #flood http://x.co wow"
        a = text_features(raw, fixture_slang, fixture_interj)
        b = text_features(raw, fixture_slang, fixture_interj)
        assert np.array_equal(a, b)


class TestUserFeatures:
    def test_zero_followers(self):
        v = user_features(UserMeta(False, 0, 0, 0))
        assert v[1] == 0.0  # log10(1)

    def test_round_counts(self):
        v = user_features(UserMeta(True, 999, 0, 0))
        assert v[0] == 1.0
        assert v[1] == 3.0  # log10(1000)

    def test_mixed(self):
        v = user_features(UserMeta(True, 9, 99, 0))
        assert np.allclose(v, [1.0, 1.0, 2.0, 0.0])

    def test_monotone_in_followers(self):
        lows = user_features(UserMeta(False, 10, 0, 0))
        highs = user_features(UserMeta(False, 11, 0, 0))
        assert lows[1] < highs[1]


class TestAssemble:
    def test_text_only(self, empty_slang, empty_interj):
        block = text_features("hello", empty_slang, empty_interj)
        assert assemble(block).shape == (12,)

    def test_with_user(self, empty_slang, empty_interj):
        block = text_features("hello", empty_slang, empty_interj)
        full = assemble(block, user_features(UserMeta(True, 1, 2, 3)))
        assert full.shape == (16,)
        assert full[12] == 1.0  # user block sits last

    def test_mixed_dims_rejected(self):
        with pytest.raises(ValueError, match="mix"):
            stack([np.zeros(12), np.zeros(16)])

    def test_layout_tags(self):
        assert layout_tag(12) != layout_tag(16)
        assert feature_names(16)[-4:] == USER_FEATURE_NAMES


@pytest.fixture()
def rows():
    return read_tsv(DATA_DIR / "feature_fixture.tsv")


class TestFixtureFile:
    """20 tweets with frozen hand-derived expectations."""

    def test_all_rows(self, rows, fixture_slang, fixture_interj):
        assert len(rows) == 20
        for row in rows:
            v = text_features(row["text"], fixture_slang, fixture_interj)
            for name in TEXT_FEATURE_NAMES:
                if name == "t_lex":
                    total = int(row["t_total"])
                    want = int(row["t_distinct"]) / total if total else 0.0
                else:
                    want = float(row[name])
                assert v[IDX[name]] == want, \
                    f"{row['id']}: {name} = {v[IDX[name]]} want {want}"

    def test_user_blocks(self, rows):
        for row in rows:
            meta = UserMeta(row["user_verified"] == "1",
                            int(row["user_followers"]),
                            int(row["user_followees"]),
                            int(row["user_tweets"]))
            v = user_features(meta)
            assert v[0] == (1.0 if meta.verified else 0.0)
            assert v[1] == math.log10(meta.followers + 1)
            assert v[2] == math.log10(meta.followees + 1)
            assert v[3] == math.log10(meta.tweets_posted + 1)

    def test_matrix_via_dataset_loader(self, fixture_slang, fixture_interj):
        schema = ColumnSchema(user_verified="user_verified",
                              user_followers="user_followers",
                              user_followees="user_followees",
                              user_tweets="user_tweets")
        ds = load_dataset(DATA_DIR / "feature_fixture.tsv", schema,
                          LabelMap.identity())
        matrix = extract_matrix(ds, fixture_slang, fixture_interj)
        assert matrix.shape == (20, 16)


class TestExport:
    def test_round_trip_layout(self, tmp_path, empty_slang, empty_interj):
        matrix = np.vstack([
            text_features("one two", empty_slang, empty_interj),
            text_features("#tag http://x.co", empty_slang, empty_interj),
        ])
        out = tmp_path / "features.tsv"
        write_feature_matrix(out, ["a", "b"], matrix)
        lines = out.read_text().splitlines()
        assert lines[0].split("\t") == ["id"] + list(TEXT_FEATURE_NAMES)
        assert len(lines) == 3
        reread = np.array([[float(c) for c in line.split("\t")[1:]]
                           for line in lines[1:]])
        assert np.array_equal(reread, matrix)
