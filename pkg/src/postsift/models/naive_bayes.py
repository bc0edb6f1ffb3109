"""Gaussian Naive Bayes with variance smoothing.

Per-class feature means and (biased) variances, plus a variance floor of
``var_smoothing`` times the largest pooled feature variance so every
log-likelihood stays finite.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from postsift.models import Container, ModelSpec, TrainedModel

_LOG_2PI = float(np.log(2.0 * np.pi))


def _mean_and_var(X) -> tuple[np.ndarray, np.ndarray]:
    if sparse.issparse(X):
        mean = np.asarray(X.mean(axis=0)).ravel()
        mean_sq = np.asarray(X.multiply(X).mean(axis=0)).ravel()
        return mean, mean_sq - mean * mean
    mean = X.mean(axis=0)
    return mean, X.var(axis=0)


class GaussianNBModel(TrainedModel):
    kind = "gnb"

    def __init__(self, theta: np.ndarray, var: np.ndarray,
                 log_prior: np.ndarray, dims: int, seed: int):
        super().__init__(dims, seed)
        self.theta = theta          # (2, d) class means, row c = class c
        self.var = var              # (2, d) smoothed class variances
        self.log_prior = log_prior  # (2,)

    def joint_log_likelihood(self, X) -> np.ndarray:
        if sparse.issparse(X):
            X = X.toarray()
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        jll = np.empty((X.shape[0], 2))
        for c in (0, 1):
            diff = X - self.theta[c]
            jll[:, c] = self.log_prior[c] - 0.5 * np.sum(
                _LOG_2PI + np.log(self.var[c]) + diff * diff / self.var[c], axis=1)
        return jll

    def posterior(self, X) -> np.ndarray:
        """(n, 2) class posteriors; each row sums to 1."""
        jll = self.joint_log_likelihood(self._prepare_dense(X))
        jll -= jll.max(axis=1, keepdims=True)
        probs = np.exp(jll)
        return probs / probs.sum(axis=1, keepdims=True)

    def _prepare_dense(self, X):
        if sparse.issparse(X):
            X = X.toarray()
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dims:
            raise ValueError(f"expected {self.dims} features, got {X.shape[1]}")
        return X

    def _score_prepared(self, X) -> np.ndarray:
        return self.posterior(X)[:, 1]

    def _prepare(self, X):
        return self._prepare_dense(X)

    def _container(self) -> Container:
        return Container(
            kind=self.kind, dims=self.dims, layout=self.layout, seed=self.seed,
            blocks={"theta": self.theta, "var": self.var,
                    "log_prior": self.log_prior})

    @classmethod
    def from_container(cls, c: Container) -> "GaussianNBModel":
        return cls(c.block("theta"), c.block("var"), c.block("log_prior"),
                   c.dims, c.seed)


def train_gnb(spec: ModelSpec, X, y: np.ndarray) -> GaussianNBModel:
    smoothing = float(spec.hyper["var_smoothing"])
    d = X.shape[1]
    _, pooled_var = _mean_and_var(X)
    max_var = float(pooled_var.max()) if d else 0.0
    eps = smoothing * max_var if max_var > 0 else smoothing
    theta = np.empty((2, d))
    var = np.empty((2, d))
    log_prior = np.empty(2)
    n = X.shape[0]
    for c in (0, 1):
        rows = np.flatnonzero(y == c)
        Xc = X[rows]
        theta[c], var[c] = _mean_and_var(Xc)
        var[c] += eps
        log_prior[c] = np.log(len(rows) / n)
    return GaussianNBModel(theta, var, log_prior, d, spec.seed)
