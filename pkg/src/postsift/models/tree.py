"""Gini decision tree and bootstrap random forest.

Split thresholds sit at midpoints between consecutive distinct sorted
values; among equal gains the smaller threshold wins, and across
features the lower feature index wins.  A node keeps splitting while it
is impure and some feature is non-constant, even at zero gain (XOR-style
data needs the zero-gain first cut).

The candidate scan is the hot loop.  A compiled kernel is used when the
extension built; the pure numpy twin is selected at import time
otherwise (or when POSTSIFT_NO_EXT=1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import sparse

from postsift import _split
from postsift.models import Container, ModelSpec, TrainedModel

if os.environ.get("POSTSIFT_NO_EXT") == "1":
    _fast = None
else:
    try:
        from postsift import _split_fast as _fast
    except ImportError:
        _fast = None

_kernel = _fast.best_split_sorted if _fast is not None else _split.best_split_sorted


def split_backend() -> str:
    """Name of the selected kernel backend: 'cython' or 'numpy'."""
    return "cython" if _fast is not None else "numpy"


def best_split(column: np.ndarray, labels: np.ndarray) -> tuple[float, float] | None:
    """Best (threshold, gini_gain) for one feature column, or None.

    None signals a constant column (no valid threshold).
    """
    column = np.ascontiguousarray(column, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if column.shape[0] < 2:
        return None
    order = np.argsort(column, kind="stable")
    values = column[order]
    idx, gain = _kernel(values, labels[order])
    if idx < 0:
        return None
    return (values[idx] + values[idx + 1]) / 2.0, gain


class _TreeArrays:
    """Flat node storage: negative feature marks a leaf."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[tuple[float, float]] = []  # (class0, class1)

    def add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append((0.0, 0.0))
        return len(self.feature) - 1


def _build_tree(X: np.ndarray, y: np.ndarray, root_rows: np.ndarray, max_depth: int,
                min_samples_split: int, n_split_features: int,
                rng: np.random.Generator | None) -> dict[str, np.ndarray]:
    d = X.shape[1]
    tree = _TreeArrays()
    root = tree.add_node()
    # Explicit stack instead of recursion: unbounded tree depth must not
    # hit the interpreter recursion limit.  Left child is processed first;
    # the fixed processing order keeps the per-tree RNG stream deterministic.
    stack: list[tuple[int, np.ndarray, int]] = [(root, root_rows, 0)]
    while stack:
        node, rows, depth = stack.pop()
        labels = y[rows]
        n_pos = int(labels.sum())
        tree.counts[node] = (float(len(rows) - n_pos), float(n_pos))

        pure = n_pos == 0 or n_pos == len(rows)
        depth_capped = max_depth > 0 and depth >= max_depth
        if pure or depth_capped or len(rows) < min_samples_split:
            continue

        if rng is not None and n_split_features < d:
            candidates = np.sort(rng.choice(d, size=n_split_features, replace=False))
        else:
            candidates = np.arange(d)

        best = None  # (gain, feature, threshold)
        for f in candidates:
            found = best_split(X[rows, f], labels)
            if found is None:
                continue
            threshold, gain = found
            if best is None or gain > best[0]:
                best = (gain, int(f), threshold)
        if best is None:
            continue

        _, feature, threshold = best
        go_left = X[rows, feature] <= threshold
        tree.feature[node] = feature
        tree.threshold[node] = threshold
        left = tree.add_node()
        right = tree.add_node()
        tree.left[node] = left
        tree.right[node] = right
        stack.append((right, rows[~go_left], depth + 1))
        stack.append((left, rows[go_left], depth + 1))
    return {
        "feature": np.asarray(tree.feature, dtype=np.float64),
        "threshold": np.asarray(tree.threshold, dtype=np.float64),
        "left": np.asarray(tree.left, dtype=np.float64),
        "right": np.asarray(tree.right, dtype=np.float64),
        "counts": np.asarray(tree.counts, dtype=np.float64),
    }


def _tree_leaf_fraction(arrays: dict[str, np.ndarray], X: np.ndarray) -> np.ndarray:
    feature = arrays["feature"].astype(np.int64)
    left = arrays["left"].astype(np.int64)
    right = arrays["right"].astype(np.int64)
    threshold = arrays["threshold"]
    counts = arrays["counts"]
    out = np.empty(X.shape[0])
    for i, x in enumerate(X):
        node = 0
        while feature[node] >= 0:
            node = left[node] if x[feature[node]] <= threshold[node] else right[node]
        c0, c1 = counts[node]
        out[i] = c1 / (c0 + c1)
    return out


def _densify(X) -> np.ndarray:
    # Trees index single columns heavily; sparse input is densified up
    # front (fine at the corpus sizes this package targets).
    if sparse.issparse(X):
        return np.asarray(X.todense(), dtype=np.float64)
    return np.atleast_2d(np.asarray(X, dtype=np.float64))


class DecisionTreeModel(TrainedModel):
    kind = "dtree"

    def __init__(self, arrays: dict[str, np.ndarray], dims: int, seed: int):
        super().__init__(dims, seed)
        self.arrays = arrays

    def _prepare(self, X):
        X = _densify(X)
        if X.shape[1] != self.dims:
            raise ValueError(f"expected {self.dims} features, got {X.shape[1]}")
        return X

    def _score_prepared(self, X) -> np.ndarray:
        # Fraction of Informative training samples in the reached leaf.
        return _tree_leaf_fraction(self.arrays, X)

    def _container(self) -> Container:
        return Container(kind=self.kind, dims=self.dims, layout=self.layout,
                         seed=self.seed, blocks=dict(self.arrays))

    @classmethod
    def from_container(cls, c: Container) -> "DecisionTreeModel":
        names = ("feature", "threshold", "left", "right", "counts")
        return cls({n: c.block(n) for n in names}, c.dims, c.seed)


def train_dtree(spec: ModelSpec, X, y: np.ndarray) -> DecisionTreeModel:
    X = _densify(X)
    arrays = _build_tree(
        X, y, np.arange(X.shape[0]),
        max_depth=int(spec.hyper["max_depth"]),
        min_samples_split=int(spec.hyper["min_samples_split"]),
        n_split_features=X.shape[1], rng=None)
    return DecisionTreeModel(arrays, X.shape[1], spec.seed)


class RandomForestModel(TrainedModel):
    kind = "rforest"

    def __init__(self, trees: list[dict[str, np.ndarray]], dims: int, seed: int):
        super().__init__(dims, seed)
        self.trees = trees

    def _prepare(self, X):
        X = _densify(X)
        if X.shape[1] != self.dims:
            raise ValueError(f"expected {self.dims} features, got {X.shape[1]}")
        return X

    def _score_prepared(self, X) -> np.ndarray:
        # Fraction of trees voting Informative; each tree votes by leaf
        # majority with ties toward NotInformative.
        votes = np.zeros(X.shape[0])
        for arrays in self.trees:
            votes += _tree_leaf_fraction(arrays, X) > 0.5
        return votes / len(self.trees)

    def _container(self) -> Container:
        blocks: dict[str, np.ndarray] = {}
        for i, arrays in enumerate(self.trees):
            for name, arr in arrays.items():
                blocks[f"tree{i}_{name}"] = arr
        return Container(
            kind=self.kind, dims=self.dims, layout=self.layout, seed=self.seed,
            params={"n_trees": str(len(self.trees))}, blocks=blocks)

    @classmethod
    def from_container(cls, c: Container) -> "RandomForestModel":
        n_trees = int(c.params["n_trees"])
        names = ("feature", "threshold", "left", "right", "counts")
        trees = [{n: c.block(f"tree{i}_{n}") for n in names}
                 for i in range(n_trees)]
        return cls(trees, c.dims, c.seed)


def train_rforest(spec: ModelSpec, X, y: np.ndarray,
                  threads: int = 1) -> RandomForestModel:
    X = _densify(X)
    n, d = X.shape
    n_trees = int(spec.hyper["n_trees"])
    bootstrap = bool(spec.hyper["bootstrap"])
    max_depth = int(spec.hyper["max_depth"])
    min_samples_split = int(spec.hyper["min_samples_split"])
    mode = spec.hyper["max_features"]
    if mode == "sqrt":
        n_split_features = max(1, int(np.sqrt(d)))
    elif mode == "all":
        n_split_features = d
    else:
        raise ValueError(f"max_features must be 'sqrt' or 'all', got {mode!r}")

    def build(i: int) -> dict[str, np.ndarray]:
        # Independent stream per tree: base seed + tree index.
        rng = np.random.default_rng(spec.seed + i)
        rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        return _build_tree(X, y, rows, max_depth, min_samples_split,
                           n_split_features, rng)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(build, range(n_trees)))
    else:
        trees = [build(i) for i in range(n_trees)]
    return RandomForestModel(trees, d, spec.seed)
