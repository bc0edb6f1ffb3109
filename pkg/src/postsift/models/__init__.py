"""Six classical classifiers with a uniform train/predict contract.

Kinds: ``logreg``, ``dtree``, ``rforest``, ``gnb``, ``mlp``, ``linsvm``.
Labels are ints with 1 = Informative, 0 = NotInformative.  ``predict``
breaks exact score ties toward NotInformative.  Dense handcrafted or
embedding features are standardized (training statistics only) for the
gradient-based kinds; TF-IDF input is already L2-normalized and trees
are scale-invariant, so sparse input and tree kinds skip it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy import sparse

from postsift.serialize import Container, ContainerError, read_container, write_container

KINDS = ("logreg", "dtree", "rforest", "gnb", "mlp", "linsvm")

#: Kinds whose dense inputs are standardized inside train().
STANDARDIZED_KINDS = ("logreg", "linsvm", "mlp")

_DEFAULT_HYPER: dict[str, dict[str, Any]] = {
    "logreg": {"alpha": 1.0, "max_iter": 1000, "tol": 1e-6},
    "linsvm": {"reg": 0.01, "lr0": 0.5, "max_iter": 2000},
    "dtree": {"max_depth": 0, "min_samples_split": 2},
    "rforest": {"n_trees": 100, "bootstrap": True, "max_features": "sqrt",
                "max_depth": 0, "min_samples_split": 2},
    "gnb": {"var_smoothing": 1e-9},
    "mlp": {"hidden": 100, "lr": 1e-3, "max_epochs": 200, "batch_size": 200,
            "plateau_tol": 1e-4, "plateau_epochs": 10},
}


@dataclass(frozen=True)
class ModelSpec:
    """Classifier kind, validated hyperparameters, and RNG seed."""

    kind: str
    hyper: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; choose from {KINDS}")
        defaults = _DEFAULT_HYPER[self.kind]
        unknown = set(self.hyper) - set(defaults)
        if unknown:
            raise ValueError(
                f"unknown hyperparameter(s) for {self.kind}: {sorted(unknown)}")
        merged = {**defaults, **self.hyper}
        object.__setattr__(self, "hyper", merged)


@dataclass(frozen=True)
class Standardizer:
    """Per-feature zero-mean unit-variance transform fit on training data."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale = np.where(scale == 0.0, 1.0, scale)
        return cls(mean=mean, scale=scale)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.scale


def validate_training_data(X, y: np.ndarray) -> None:
    n = X.shape[0]
    if n == 0:
        raise ValueError("training matrix is empty")
    if y.shape[0] != n:
        raise ValueError(f"{n} rows but {y.shape[0]} labels")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 (NotInformative) or 1 (Informative)")
    if len(np.unique(y)) < 2:
        raise ValueError("training set contains a single class")
    if sparse.issparse(X):
        csr = X.tocsr()
        bad_cells = ~np.isfinite(csr.data)
        if bad_cells.any():
            bad = int(np.searchsorted(
                csr.indptr, np.flatnonzero(bad_cells)[0], side="right") - 1)
            raise ValueError(f"row {bad} contains a non-finite feature value")
    else:
        finite_rows = np.isfinite(np.asarray(X, dtype=np.float64)).all(axis=1)
        if not finite_rows.all():
            bad = int(np.flatnonzero(~finite_rows)[0])
            raise ValueError(f"row {bad} contains a non-finite feature value")


def train(spec: ModelSpec, X, y: np.ndarray, layout: str = "unversioned",
          threads: int = 1):
    """Train the classifier named by the spec; deterministic given the seed.

    ``threads`` only affects the random forest, whose trees carry
    independent seeded RNG streams and train identically in any order.
    """
    from postsift.models import linear, mlp, naive_bayes, tree

    y = np.asarray(y, dtype=np.int64)
    validate_training_data(X, y)
    scaler = None
    if not sparse.issparse(X):
        X = np.asarray(X, dtype=np.float64)
        if spec.kind in STANDARDIZED_KINDS:
            scaler = Standardizer.fit(X)
            X = scaler.transform(X)
    trainers = {
        "logreg": linear.train_logreg,
        "linsvm": linear.train_linsvm,
        "dtree": tree.train_dtree,
        "gnb": naive_bayes.train_gnb,
        "mlp": mlp.train_mlp,
    }
    if spec.kind == "rforest":
        model = tree.train_rforest(spec, X, y, threads=threads)
    else:
        model = trainers[spec.kind](spec, X, y)
    model.layout = layout
    model.scaler = scaler
    return model


class TrainedModel:
    """Shared prediction surface; subclasses provide ``_score_prepared``."""

    kind: str = ""

    def __init__(self, dims: int, seed: int):
        self.dims = dims
        self.seed = seed
        self.layout = "unversioned"
        self.scaler: Standardizer | None = None

    def _prepare(self, X):
        if sparse.issparse(X):
            if X.shape[1] != self.dims:
                raise ValueError(f"expected {self.dims} features, got {X.shape[1]}")
            return X
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dims:
            raise ValueError(f"expected {self.dims} features, got {X.shape[1]}")
        if self.scaler is not None:
            X = self.scaler.transform(X)
        return X

    def predict_score(self, X) -> np.ndarray:
        """Score for the Informative class: probability or margin per row."""
        return self._score_prepared(self._prepare(X))

    def predict(self, X) -> np.ndarray:
        """Int labels; exact decision-boundary ties go to NotInformative."""
        return (self.predict_score(X) > self._decision_threshold()).astype(np.int64)

    def _decision_threshold(self) -> float:
        return 0.5

    def _score_prepared(self, X) -> np.ndarray:
        raise NotImplementedError

    def _container(self) -> Container:
        raise NotImplementedError

    def save(self, path: str | Path) -> None:
        container = self._container()
        container.layout = self.layout
        if self.scaler is not None:
            container.params["standardized"] = "1"
            container.blocks["scaler_mean"] = self.scaler.mean
            container.blocks["scaler_scale"] = self.scaler.scale
        write_container(path, container)


def predict(model: TrainedModel, x) -> np.ndarray:
    """Module-level alias of the per-row/batch predict contract."""
    return model.predict(x)


def predict_score(model: TrainedModel, x) -> np.ndarray:
    return model.predict_score(x)


def load_model(path: str | Path) -> TrainedModel:
    """Reload any saved model to an object with identical predictions."""
    from postsift.models import linear, mlp, naive_bayes, tree

    container = read_container(path)
    loaders = {
        "logreg": linear.LogisticRegressionModel.from_container,
        "linsvm": linear.LinearSVMModel.from_container,
        "dtree": tree.DecisionTreeModel.from_container,
        "rforest": tree.RandomForestModel.from_container,
        "gnb": naive_bayes.GaussianNBModel.from_container,
        "mlp": mlp.MLPModel.from_container,
    }
    try:
        loader = loaders[container.kind]
    except KeyError:
        raise ContainerError(f"unknown model kind {container.kind!r}") from None
    model = loader(container)
    model.layout = container.layout
    if container.params.get("standardized") == "1":
        model.scaler = Standardizer(
            mean=container.block("scaler_mean"),
            scale=container.block("scaler_scale"))
    return model
