"""Two-branch hybrid head: handcrafted features + frozen encoder vectors.

One linear layer embeds the handcrafted vector, another embeds the
sentence-encoder vector; the branch outputs are concatenated and passed
through a third linear layer and a softmax.  Class index 0 is
Informative, index 1 is NotInformative, and exact probability ties
predict NotInformative.

Branch outputs get a ReLU by default (two purely linear branches would
collapse into a single affine map); ``activation="identity"`` restores
the collapsed reading for comparison runs.

Handcrafted inputs are expected already standardized with training-fold
statistics; encoder vectors are consumed as-is (the encoder itself is
frozen and lives behind the sentence-vector interchange file).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from postsift.serialize import Container, read_container, write_container

#: Softmax class layout.
INFORMATIVE_CLASS = 0
NOT_INFORMATIVE_CLASS = 1

_BLOCKS = ("W1", "b1", "W2", "b2", "W3", "b3")


@dataclass(frozen=True)
class HybridConfig:
    """Branch dimensions; defaults follow the input dimensionalities."""

    d_h: int
    d_e: int
    p: int = 32
    q: int = 128
    activation: str = "relu"

    def __post_init__(self):
        for name in ("d_h", "d_e", "p", "q"):
            if getattr(self, name) < 1:
                raise ValueError(f"HybridConfig.{name} must be >= 1")
        if self.activation not in ("relu", "identity"):
            raise ValueError("activation must be 'relu' or 'identity'")


@dataclass(frozen=True)
class TrainSettings:
    """Mini-batch SGD-with-momentum settings."""

    learning_rate: float = 0.001
    momentum: float = 0.9
    epochs: int = 20
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")


@dataclass
class HybridParams:
    """The three weight/bias pairs of the head."""

    W1: np.ndarray  # (p, d_h)
    b1: np.ndarray  # (p,)
    W2: np.ndarray  # (q, d_e)
    b2: np.ndarray  # (q,)
    W3: np.ndarray  # (2, p + q)
    b3: np.ndarray  # (2,)
    activation: str = "relu"

    def blocks(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in _BLOCKS}

    def copy(self) -> "HybridParams":
        return HybridParams(**{n: getattr(self, n).copy() for n in _BLOCKS},
                            activation=self.activation)


def init_params(config: HybridConfig, rng: np.random.Generator) -> HybridParams:
    """Uniform +/- 1/sqrt(fan_in) initialization for weights and biases."""
    def layer(rows: int, fan_in: int) -> tuple[np.ndarray, np.ndarray]:
        bound = 1.0 / np.sqrt(fan_in)
        return (rng.uniform(-bound, bound, size=(rows, fan_in)),
                rng.uniform(-bound, bound, size=rows))

    W1, b1 = layer(config.p, config.d_h)
    W2, b2 = layer(config.q, config.d_e)
    W3, b3 = layer(2, config.p + config.q)
    return HybridParams(W1, b1, W2, b2, W3, b3, activation=config.activation)


def _act(A: np.ndarray, activation: str) -> np.ndarray:
    return np.maximum(A, 0.0) if activation == "relu" else A


def _softmax(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    e = np.exp(Z)
    return e / e.sum(axis=1, keepdims=True)


def forward_batch(params: HybridParams, H: np.ndarray, E: np.ndarray) -> np.ndarray:
    """(n, 2) class probabilities, column 0 = Informative."""
    H = np.atleast_2d(H)
    E = np.atleast_2d(E)
    if H.shape[1] != params.W1.shape[1]:
        raise ValueError(
            f"handcrafted input has dim {H.shape[1]}, expected {params.W1.shape[1]}")
    if E.shape[1] != params.W2.shape[1]:
        raise ValueError(
            f"encoder input has dim {E.shape[1]}, expected {params.W2.shape[1]}")
    U = _act(H @ params.W1.T + params.b1, params.activation)
    V = _act(E @ params.W2.T + params.b2, params.activation)
    Z = np.hstack([U, V]) @ params.W3.T + params.b3
    return _softmax(Z)


def forward(params: HybridParams, h: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Probability pair (Informative, NotInformative) for one example."""
    return forward_batch(params, h, e)[0]


def loss(probs: np.ndarray, y: int) -> float:
    """Negative log probability of the true class index, floored at 1e-12."""
    return float(-np.log(max(probs[y], 1e-12)))


def gradients(params: HybridParams, H: np.ndarray, E: np.ndarray,
              y: np.ndarray) -> dict[str, np.ndarray]:
    """Backprop gradients of the mean batch loss for every block."""
    H = np.atleast_2d(H)
    E = np.atleast_2d(E)
    y = np.asarray(y, dtype=np.int64)
    n = H.shape[0]
    if n == 0:
        raise ValueError("gradient batch is empty")
    A1 = H @ params.W1.T + params.b1
    A2 = E @ params.W2.T + params.b2
    U = _act(A1, params.activation)
    V = _act(A2, params.activation)
    C = np.hstack([U, V])
    P = _softmax(C @ params.W3.T + params.b3)

    dZ = P.copy()
    dZ[np.arange(n), y] -= 1.0
    dZ /= n
    gW3 = dZ.T @ C
    gb3 = dZ.sum(axis=0)
    dC = dZ @ params.W3
    p = params.W1.shape[0]
    dU, dV = dC[:, :p], dC[:, p:]
    if params.activation == "relu":
        dU = dU * (A1 > 0.0)
        dV = dV * (A2 > 0.0)
    return {
        "W1": dU.T @ H, "b1": dU.sum(axis=0),
        "W2": dV.T @ E, "b2": dV.sum(axis=0),
        "W3": gW3, "b3": gb3,
    }


def mean_loss(params: HybridParams, H: np.ndarray, E: np.ndarray,
              y: np.ndarray) -> float:
    """Mean cross-entropy of a batch (floored per example at 1e-12)."""
    P = forward_batch(params, H, E)
    picked = np.clip(P[np.arange(len(y)), np.asarray(y)], 1e-12, None)
    return float(np.mean(-np.log(picked)))


def train_hybrid(config: HybridConfig, settings: TrainSettings, H: np.ndarray,
                 E: np.ndarray, y: np.ndarray) -> HybridParams:
    """Exactly ``settings.epochs`` epochs of seeded mini-batch SGD + momentum.

    The update is classical momentum: velocity = momentum * velocity -
    lr * grad; param += velocity.  The last short mini-batch is kept.
    """
    H = np.atleast_2d(np.asarray(H, dtype=np.float64))
    E = np.atleast_2d(np.asarray(E, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    n = H.shape[0]
    if n == 0:
        raise ValueError("training set is empty")
    if len(np.unique(y)) < 2:
        raise ValueError("training set contains a single class")

    rng = np.random.default_rng(settings.seed)
    params = init_params(config, rng)
    velocity = {name: np.zeros_like(block) for name, block in params.blocks().items()}
    for _ in range(settings.epochs):
        order = rng.permutation(n)
        for start in range(0, n, settings.batch_size):
            batch = order[start:start + settings.batch_size]
            grads = gradients(params, H[batch], E[batch], y[batch])
            for name, grad in grads.items():
                velocity[name] = settings.momentum * velocity[name] \
                    - settings.learning_rate * grad
                setattr(params, name, getattr(params, name) + velocity[name])
    return params


def predict_hybrid(params: HybridParams, h: np.ndarray, e: np.ndarray) -> int:
    """Class index by argmax; an exact tie predicts NotInformative."""
    probs = forward(params, h, e)
    if probs[INFORMATIVE_CLASS] > probs[NOT_INFORMATIVE_CLASS]:
        return INFORMATIVE_CLASS
    return NOT_INFORMATIVE_CLASS


def predict_hybrid_batch(params: HybridParams, H: np.ndarray,
                         E: np.ndarray) -> np.ndarray:
    P = forward_batch(params, H, E)
    out = np.full(P.shape[0], NOT_INFORMATIVE_CLASS, dtype=np.int64)
    out[P[:, INFORMATIVE_CLASS] > P[:, NOT_INFORMATIVE_CLASS]] = INFORMATIVE_CLASS
    return out


def save_params(path: str | Path, params: HybridParams, seed: int = 0,
                layout: str = "unversioned") -> None:
    container = Container(
        kind="hybrid", dims=params.W1.shape[1], layout=layout, seed=seed,
        params={"activation": params.activation,
                "d_e": str(params.W2.shape[1])},
        blocks=params.blocks())
    write_container(path, container)


def load_params(path: str | Path) -> HybridParams:
    container = read_container(path)
    if container.kind != "hybrid":
        raise ValueError(f"{path} holds a {container.kind!r} model, not hybrid")
    blocks = {name: container.block(name) for name in _BLOCKS}
    return HybridParams(**blocks,
                        activation=container.params.get("activation", "relu"))
