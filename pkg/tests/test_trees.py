import numpy as np
import pytest

from postsift import _split
from postsift.models import ModelSpec, train
from postsift.models.tree import best_split, split_backend, _fast


def brute_force_best_split(column, labels):
    """Exhaustive midpoint search; the oracle for best_split."""
    order = np.argsort(column, kind="stable")
    v = column[order]
    lab = labels[order]
    n = len(v)

    def gini(arr):
        if len(arr) == 0:
            return 0.0
        p = arr.mean()
        return 1.0 - p * p - (1.0 - p) * (1.0 - p)

    parent = gini(lab)
    best = None
    for i in range(n - 1):
        if v[i] == v[i + 1]:
            continue
        left, right = lab[:i + 1], lab[i + 1:]
        weighted = (len(left) * gini(left) + len(right) * gini(right)) / n
        gain = parent - weighted
        thr = (v[i] + v[i + 1]) / 2.0
        if best is None or gain > best[1] + 1e-15:
            best = (thr, gain)
    return best


class TestBestSplit:
    def test_clean_split(self):
        thr, gain = best_split(np.array([1.0, 2.0, 3.0, 4.0]),
                               np.array([0, 0, 1, 1]))
        assert thr == 2.5
        assert gain == pytest.approx(0.5)  # parent 0.5, children pure

    def test_constant_column(self):
        assert best_split(np.full(6, 3.3), np.array([0, 1, 0, 1, 0, 1])) is None

    def test_tie_breaks_toward_smaller_threshold(self):
        # Symmetric labels: splitting after the first or last element
        # gives equal gain; the smaller threshold must win.
        column = np.array([1.0, 2.0, 3.0, 4.0])
        labels = np.array([1, 0, 0, 1])
        thr, _ = best_split(column, labels)
        assert thr == 1.5

    def test_matches_brute_force_on_random_columns(self):
        rng = np.random.default_rng(77)
        for _ in range(50):
            column = rng.normal(size=12)
            labels = rng.integers(0, 2, size=12).astype(np.int64)
            got = best_split(column, labels)
            want = brute_force_best_split(column, labels)
            if want is None:
                assert got is None
            else:
                assert got[0] == want[0]
                assert abs(got[1] - want[1]) <= 1e-12

    def test_discrete_values_against_brute_force(self):
        rng = np.random.default_rng(78)
        for _ in range(50):
            column = rng.integers(0, 4, size=12).astype(np.float64)
            labels = rng.integers(0, 2, size=12).astype(np.int64)
            got = best_split(column, labels)
            want = brute_force_best_split(column, labels)
            if want is None:
                assert got is None
            else:
                assert got[0] == want[0]
                assert abs(got[1] - want[1]) <= 1e-12


@pytest.mark.skipif(_fast is None, reason="compiled kernel not built")
class TestKernelEquivalence:
    def test_backends_agree_bit_for_bit(self):
        rng = np.random.default_rng(99)
        for trial in range(300):
            n = int(rng.integers(2, 80))
            if trial % 3 == 0:
                column = rng.integers(0, 5, size=n).astype(np.float64)
            else:
                column = rng.normal(size=n)
            labels = rng.integers(0, 2, size=n).astype(np.int64)
            order = np.argsort(column, kind="stable")
            v = np.ascontiguousarray(column[order])
            lab = np.ascontiguousarray(labels[order])
            fast_idx, fast_gain = _fast.best_split_sorted(v, lab)
            slow_idx, slow_gain = _split.best_split_sorted(v, lab)
            assert fast_idx == slow_idx
            assert fast_gain == slow_gain  # identical bits

    def test_backend_reports_cython(self):
        assert split_backend() == "cython"


class TestDecisionTree:
    def test_xor_fits_perfectly(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        y = np.array([0, 1, 1, 0])
        model = train(ModelSpec("dtree"), X, y)
        assert np.array_equal(model.predict(X), y)

    def test_training_points_memorized(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(60, 4))
        y = rng.integers(0, 2, size=60).astype(np.int64)
        if len(np.unique(y)) < 2:
            y[0] = 1 - y[0]
        model = train(ModelSpec("dtree"), X, y)
        assert np.array_equal(model.predict(X), y)

    def test_leaf_fraction_score(self):
        X = np.array([[0.0], [0.0], [0.0], [1.0]])
        y = np.array([0, 0, 1, 1])
        # depth 1: left leaf holds {0,0,1}, right leaf {1}
        model = train(ModelSpec("dtree", {"max_depth": 1}), X, y)
        scores = model.predict_score(X)
        assert scores[0] == pytest.approx(1 / 3)
        assert scores[3] == 1.0

    def test_max_depth_limits_growth(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(100, 3))
        y = rng.integers(0, 2, size=100).astype(np.int64)
        stump = train(ModelSpec("dtree", {"max_depth": 1}), X, y)
        assert len(stump.arrays["feature"]) <= 3

    def test_determinism_bit_identical(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(120, 5))
        y = rng.integers(0, 2, size=120).astype(np.int64)
        a = train(ModelSpec("dtree"), X, y)
        b = train(ModelSpec("dtree"), X, y)
        for key in a.arrays:
            assert np.array_equal(a.arrays[key], b.arrays[key])


class TestRandomForest:
    def test_single_tree_reduces_to_decision_tree(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(80, 4))
        y = rng.integers(0, 2, size=80).astype(np.int64)
        forest = train(ModelSpec(
            "rforest", {"n_trees": 1, "bootstrap": False, "max_features": "all"}),
            X, y)
        dtree = train(ModelSpec("dtree"), X, y)
        probe = rng.normal(size=(200, 4))
        assert np.array_equal(forest.predict(probe), dtree.predict(probe))

    def test_score_is_vote_fraction(self):
        X, y = np.array([[0.0], [1.0], [2.0], [3.0]]), np.array([0, 0, 1, 1])
        model = train(ModelSpec("rforest", {"n_trees": 25}, seed=5), X, y)
        scores = model.predict_score(np.array([[0.0], [3.0]]))
        votes = scores * 25
        assert np.allclose(votes, np.round(votes))

    def test_determinism_bit_identical(self):
        rng = np.random.default_rng(14)
        X = rng.normal(size=(60, 5))
        y = rng.integers(0, 2, size=60).astype(np.int64)
        a = train(ModelSpec("rforest", {"n_trees": 8}, seed=21), X, y)
        b = train(ModelSpec("rforest", {"n_trees": 8}, seed=21), X, y)
        for ta, tb in zip(a.trees, b.trees):
            for key in ta:
                assert np.array_equal(ta[key], tb[key])

    def test_threads_do_not_change_model(self):
        rng = np.random.default_rng(15)
        X = rng.normal(size=(60, 5))
        y = rng.integers(0, 2, size=60).astype(np.int64)
        spec = ModelSpec("rforest", {"n_trees": 6}, seed=9)
        serial = train(spec, X, y, threads=1)
        parallel = train(spec, X, y, threads=4)
        for ta, tb in zip(serial.trees, parallel.trees):
            for key in ta:
                assert np.array_equal(ta[key], tb[key])

    def test_seed_changes_forest(self):
        rng = np.random.default_rng(16)
        X = rng.normal(size=(60, 5))
        y = rng.integers(0, 2, size=60).astype(np.int64)
        a = train(ModelSpec("rforest", {"n_trees": 4}, seed=1), X, y)
        b = train(ModelSpec("rforest", {"n_trees": 4}, seed=2), X, y)
        same = all(np.array_equal(ta[k], tb[k])
                   for ta, tb in zip(a.trees, b.trees) for k in ta)
        assert not same
