"""Logistic regression and linear hinge-loss SVM trained from scratch.

Logistic regression minimizes L2-regularized mean cross-entropy with
full-batch gradient descent and Armijo backtracking line search, which
makes the loss non-increasing by construction.  The linear SVM minimizes
L2-regularized mean hinge loss by deterministic sub-gradient descent
with a decaying step (stand-in for the cited toolkit's RBF-kernel SVM;
a full kernel solver is out of scope).
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from postsift.models import Container, ModelSpec, TrainedModel


def _matvec(X, w: np.ndarray) -> np.ndarray:
    return np.asarray(X @ w).ravel()


def _rmatvec(X, v: np.ndarray) -> np.ndarray:
    if sparse.issparse(X):
        return np.asarray(X.T @ v).ravel()
    return X.T @ v


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_loss_grad(theta: np.ndarray, X, y: np.ndarray,
                     alpha: float) -> tuple[float, np.ndarray]:
    """Mean cross-entropy + (alpha / 2n)||w||^2 and its gradient.

    ``theta`` packs [w, b]; the bias is not penalized.  Exposed at module
    level so finite-difference checks can drive it directly.
    """
    n = X.shape[0]
    w, b = theta[:-1], theta[-1]
    z = _matvec(X, w) + b
    # log(1 + e^z) - y z, computed stably
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    loss += alpha / (2.0 * n) * float(w @ w)
    residual = sigmoid(z) - y
    grad_w = _rmatvec(X, residual) / n + (alpha / n) * w
    grad_b = float(np.mean(residual))
    return loss, np.concatenate([grad_w, [grad_b]])


class LogisticRegressionModel(TrainedModel):
    kind = "logreg"

    def __init__(self, weights: np.ndarray, bias: float, dims: int, seed: int):
        super().__init__(dims, seed)
        self.weights = weights
        self.bias = bias
        self.loss_history: list[float] = []

    def _score_prepared(self, X) -> np.ndarray:
        return sigmoid(_matvec(X, self.weights) + self.bias)

    def _container(self) -> Container:
        return Container(
            kind=self.kind, dims=self.dims, layout=self.layout, seed=self.seed,
            blocks={"weights": self.weights, "bias": np.array([self.bias])})

    @classmethod
    def from_container(cls, c: Container) -> "LogisticRegressionModel":
        return cls(c.block("weights"), float(c.block("bias")[0]), c.dims, c.seed)


def train_logreg(spec: ModelSpec, X, y: np.ndarray) -> LogisticRegressionModel:
    alpha = float(spec.hyper["alpha"])
    max_iter = int(spec.hyper["max_iter"])
    tol = float(spec.hyper["tol"])
    d = X.shape[1]
    theta = np.zeros(d + 1)
    loss, grad = logreg_loss_grad(theta, X, y, alpha)
    history = [loss]
    step = 1.0
    for _ in range(max_iter):
        gnorm2 = float(grad @ grad)
        if np.sqrt(gnorm2) <= tol:
            break
        # Armijo backtracking from twice the last accepted step.
        step = min(step * 2.0, 1e4)
        accepted = False
        while step >= 1e-16:
            candidate = theta - step * grad
            new_loss, new_grad = logreg_loss_grad(candidate, X, y, alpha)
            if new_loss <= loss - 1e-4 * step * gnorm2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        theta, loss, grad = candidate, new_loss, new_grad
        history.append(loss)
    model = LogisticRegressionModel(theta[:-1], float(theta[-1]), d, spec.seed)
    model.loss_history = history
    return model


def svm_objective(w: np.ndarray, b: float, X, y: np.ndarray, reg: float) -> float:
    """(reg / 2)||w||^2 + mean hinge loss with +/-1 targets."""
    margins = (2.0 * y - 1.0) * (_matvec(X, w) + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * reg * float(w @ w) + float(np.mean(hinge))


class LinearSVMModel(TrainedModel):
    kind = "linsvm"

    def __init__(self, weights: np.ndarray, bias: float, dims: int, seed: int):
        super().__init__(dims, seed)
        self.weights = weights
        self.bias = bias

    def _score_prepared(self, X) -> np.ndarray:
        # Signed margin, not a probability.
        return _matvec(X, self.weights) + self.bias

    def _decision_threshold(self) -> float:
        return 0.0

    def _container(self) -> Container:
        return Container(
            kind=self.kind, dims=self.dims, layout=self.layout, seed=self.seed,
            blocks={"weights": self.weights, "bias": np.array([self.bias])})

    @classmethod
    def from_container(cls, c: Container) -> "LinearSVMModel":
        return cls(c.block("weights"), float(c.block("bias")[0]), c.dims, c.seed)


def train_linsvm(spec: ModelSpec, X, y: np.ndarray) -> LinearSVMModel:
    reg = float(spec.hyper["reg"])
    lr0 = float(spec.hyper["lr0"])
    max_iter = int(spec.hyper["max_iter"])
    n, d = X.shape
    targets = 2.0 * np.asarray(y, dtype=np.float64) - 1.0
    w = np.zeros(d)
    b = 0.0
    for t in range(max_iter):
        margins = targets * (_matvec(X, w) + b)
        active = margins < 1.0
        coeff = np.where(active, targets, 0.0)
        grad_w = reg * w - _rmatvec(X, coeff) / n
        grad_b = -float(np.sum(coeff)) / n
        lr = lr0 / (1.0 + lr0 * reg * t)
        w -= lr * grad_w
        b -= lr * grad_b
    return LinearSVMModel(w, b, d, spec.seed)
