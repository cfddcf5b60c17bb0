"""One-hidden-layer rectifier network with a 3-way softmax head, in numpy.

Float64 throughout; forward/backward are plain matrix algebra so analytic
gradients can be checked against finite differences, and all randomness
comes from a caller-supplied generator so runs are bit-reproducible.
"""

from __future__ import annotations

import numpy as np


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted for stability; rows sum to 1."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True)


class MlpNetwork:
    """Weights in row-major (C-order) arrays: W1 (in, hidden), W2 (hidden, out)."""

    def __init__(self, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: np.ndarray):
        self.w1 = np.ascontiguousarray(w1, dtype=np.float64)
        self.b1 = np.ascontiguousarray(b1, dtype=np.float64)
        self.w2 = np.ascontiguousarray(w2, dtype=np.float64)
        self.b2 = np.ascontiguousarray(b2, dtype=np.float64)

    @classmethod
    def initialize(cls, input_dim: int, hidden_dim: int, n_classes: int, rng: np.random.Generator) -> "MlpNetwork":
        """Weights uniform in +/- 1/sqrt(fan_in); biases zero."""
        bound1 = 1.0 / np.sqrt(input_dim)
        bound2 = 1.0 / np.sqrt(hidden_dim)
        return cls(
            w1=rng.uniform(-bound1, bound1, size=(input_dim, hidden_dim)),
            b1=np.zeros(hidden_dim),
            w2=rng.uniform(-bound2, bound2, size=(hidden_dim, n_classes)),
            b2=np.zeros(n_classes),
        )

    @property
    def input_dim(self) -> int:
        return self.w1.shape[0]

    @property
    def hidden_dim(self) -> int:
        return self.w1.shape[1]

    @property
    def n_classes(self) -> int:
        return self.w2.shape[1]

    def copy(self) -> "MlpNetwork":
        return MlpNetwork(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Class probabilities, shape (batch, n_classes)."""
        hidden = np.maximum(0.0, x @ self.w1 + self.b1)
        return softmax(hidden @ self.w2 + self.b2)

    def loss(self, x: np.ndarray, y_onehot: np.ndarray) -> float:
        """Mean cross-entropy of the batch (computed via log-softmax)."""
        hidden = np.maximum(0.0, x @ self.w1 + self.b1)
        logits = hidden @ self.w2 + self.b2
        shifted = logits - logits.max(axis=-1, keepdims=True)
        log_probs = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
        return float(-(y_onehot * log_probs).sum() / x.shape[0])

    def loss_and_grads(self, x: np.ndarray, y_onehot: np.ndarray):
        """Returns (loss, probs, grads) with grads keyed like the weight attributes."""
        batch = x.shape[0]
        pre_hidden = x @ self.w1 + self.b1
        hidden = np.maximum(0.0, pre_hidden)
        logits = hidden @ self.w2 + self.b2
        shifted = logits - logits.max(axis=-1, keepdims=True)
        exps = np.exp(shifted)
        probs = exps / exps.sum(axis=-1, keepdims=True)
        log_probs = shifted - np.log(exps.sum(axis=-1, keepdims=True))
        loss = float(-(y_onehot * log_probs).sum() / batch)

        delta = (probs - y_onehot) / batch
        d_hidden = delta @ self.w2.T
        d_hidden[pre_hidden <= 0.0] = 0.0
        grads = {
            "w1": x.T @ d_hidden,
            "b1": d_hidden.sum(axis=0),
            "w2": hidden.T @ delta,
            "b2": delta.sum(axis=0),
        }
        return loss, probs, grads

    def apply_update(self, grads: dict[str, np.ndarray], learning_rate: float) -> None:
        self.w1 -= learning_rate * grads["w1"]
        self.b1 -= learning_rate * grads["b1"]
        self.w2 -= learning_rate * grads["w2"]
        self.b2 -= learning_rate * grads["b2"]

    # Flat views in a fixed order, for gradient checking and persistence.

    def get_flat(self) -> np.ndarray:
        return np.concatenate([self.w1.ravel(), self.b1, self.w2.ravel(), self.b2])

    def set_flat(self, flat: np.ndarray) -> None:
        expected = self.w1.size + self.b1.size + self.w2.size + self.b2.size
        if flat.shape != (expected,):
            raise ValueError(f"expected {expected} parameters, got shape {flat.shape}")
        cursor = 0
        for array in (self.w1, self.b1, self.w2, self.b2):
            array[...] = flat[cursor : cursor + array.size].reshape(array.shape)
            cursor += array.size

    def flat_grads(self, grads: dict[str, np.ndarray]) -> np.ndarray:
        return np.concatenate([grads["w1"].ravel(), grads["b1"], grads["w2"].ravel(), grads["b2"]])
