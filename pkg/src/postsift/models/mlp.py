"""One-hidden-layer perceptron: ReLU, softmax, adaptive-moment updates.

Mini-batch training with the Adam update (step 1e-3), at most 200
epochs, early stop when the epoch mean loss improves by less than
``plateau_tol`` for ``plateau_epochs`` consecutive epochs.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from postsift.models import Container, ModelSpec, TrainedModel

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPS = 1e-8


def _softmax(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    e = np.exp(Z)
    return e / e.sum(axis=1, keepdims=True)


def mlp_loss_grad(params: dict[str, np.ndarray], X, y: np.ndarray
                  ) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy over a batch and gradients for all four blocks.

    ``params`` holds W1 (h, d), b1 (h), W2 (2, h), b2 (2).  Exposed for
    finite-difference verification.
    """
    n = X.shape[0]
    A = np.asarray(X @ params["W1"].T) + params["b1"]
    H = np.maximum(A, 0.0)
    Z = H @ params["W2"].T + params["b2"]
    P = _softmax(Z)
    picked = np.clip(P[np.arange(n), y], 1e-12, None)
    loss = float(np.mean(-np.log(picked)))

    dZ = P.copy()
    dZ[np.arange(n), y] -= 1.0
    dZ /= n
    gW2 = dZ.T @ H
    gb2 = dZ.sum(axis=0)
    dH = dZ @ params["W2"]
    dA = dH * (A > 0.0)
    if sparse.issparse(X):
        gW1 = np.asarray((X.T @ dA).T)
    else:
        gW1 = dA.T @ X
    gb1 = dA.sum(axis=0)
    return loss, {"W1": gW1, "b1": gb1, "W2": gW2, "b2": gb2}


def _init_params(d: int, hidden: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
    # Uniform +/- 1/sqrt(fan_in) for weights and biases alike.
    bound1 = 1.0 / np.sqrt(d)
    bound2 = 1.0 / np.sqrt(hidden)
    return {
        "W1": rng.uniform(-bound1, bound1, size=(hidden, d)),
        "b1": rng.uniform(-bound1, bound1, size=hidden),
        "W2": rng.uniform(-bound2, bound2, size=(2, hidden)),
        "b2": rng.uniform(-bound2, bound2, size=2),
    }


class MLPModel(TrainedModel):
    kind = "mlp"

    def __init__(self, params: dict[str, np.ndarray], dims: int, seed: int):
        super().__init__(dims, seed)
        self.params = params

    def _score_prepared(self, X) -> np.ndarray:
        A = np.asarray(X @ self.params["W1"].T) + self.params["b1"]
        H = np.maximum(A, 0.0)
        P = _softmax(H @ self.params["W2"].T + self.params["b2"])
        return P[:, 1]

    def _container(self) -> Container:
        return Container(kind=self.kind, dims=self.dims, layout=self.layout,
                         seed=self.seed, blocks=dict(self.params))

    @classmethod
    def from_container(cls, c: Container) -> "MLPModel":
        params = {n: c.block(n) for n in ("W1", "b1", "W2", "b2")}
        return cls(params, c.dims, c.seed)


def train_mlp(spec: ModelSpec, X, y: np.ndarray) -> MLPModel:
    hidden = int(spec.hyper["hidden"])
    lr = float(spec.hyper["lr"])
    max_epochs = int(spec.hyper["max_epochs"])
    plateau_tol = float(spec.hyper["plateau_tol"])
    plateau_epochs = int(spec.hyper["plateau_epochs"])
    n, d = X.shape
    batch_size = min(int(spec.hyper["batch_size"]), n)

    rng = np.random.default_rng(spec.seed)
    params = _init_params(d, hidden, rng)
    m = {k: np.zeros_like(p) for k, p in params.items()}
    v = {k: np.zeros_like(p) for k, p in params.items()}
    step = 0
    best_loss = np.inf
    stale = 0
    for _ in range(max_epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, batch_size):
            batch = order[start:start + batch_size]
            loss, grads = mlp_loss_grad(params, X[batch], y[batch])
            epoch_loss += loss * len(batch)
            step += 1
            for key, grad in grads.items():
                m[key] = _ADAM_BETA1 * m[key] + (1 - _ADAM_BETA1) * grad
                v[key] = _ADAM_BETA2 * v[key] + (1 - _ADAM_BETA2) * grad * grad
                m_hat = m[key] / (1 - _ADAM_BETA1 ** step)
                v_hat = v[key] / (1 - _ADAM_BETA2 ** step)
                params[key] = params[key] - lr * m_hat / (np.sqrt(v_hat) + _ADAM_EPS)
        epoch_loss /= n
        if epoch_loss < best_loss - plateau_tol:
            best_loss = epoch_loss
            stale = 0
        else:
            stale += 1
            if stale >= plateau_epochs:
                break
    return MLPModel(params, d, spec.seed)
