"""One-dimensional convolutional regression network in plain numpy.

Architecture: two convolution layers (64 filters, kernel 3, stride 1, no
padding, ReLU) each followed by dropout, then a flatten, a 32-unit dense
layer and a single linear output. Trained with mini-batch gradient descent
(momentum 0.9) on the mean squared error plus an L2 weight penalty.
"""

from __future__ import annotations

import numpy as np

from ..rng import RandomStream

KERNEL = 3
FILTERS = 64
DENSE_UNITS = 32
DROPOUT_RATE = 0.2
L2_COEFF = 1e-4
MOMENTUM = 0.9


def _im2col(x: np.ndarray, kernel: int) -> np.ndarray:
    """(B, L, C) -> (B, L - kernel + 1, kernel * C) sliding windows."""
    b, length, channels = x.shape
    out_len = length - kernel + 1
    cols = np.empty((b, out_len, kernel, channels), dtype=x.dtype)
    for j in range(kernel):
        cols[:, :, j, :] = x[:, j:j + out_len, :]
    return cols.reshape(b, out_len, kernel * channels)


class ConvNet1D:
    def __init__(self, n_inputs: int, rng: RandomStream,
                 dropout: float = DROPOUT_RATE, l2: float = L2_COEFF):
        if n_inputs < 2 * KERNEL - 1:
            raise ValueError(
                f"input length {n_inputs} is too short for two stacked "
                f"convolutions of kernel size {KERNEL}")
        self.n_inputs = n_inputs
        self.dropout = dropout
        self.l2 = l2
        self.len1 = n_inputs - KERNEL + 1
        self.len2 = self.len1 - KERNEL + 1
        flat = self.len2 * FILTERS

        def he(shape, fan_in):
            return rng.gen.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)

        self.params = {
            "w1": he((KERNEL, FILTERS), KERNEL),
            "b1": np.zeros(FILTERS),
            "w2": he((KERNEL * FILTERS, FILTERS), KERNEL * FILTERS),
            "b2": np.zeros(FILTERS),
            "w3": he((flat, DENSE_UNITS), flat),
            "b3": np.zeros(DENSE_UNITS),
            "w4": rng.gen.normal(0.0, np.sqrt(1.0 / DENSE_UNITS), size=(DENSE_UNITS, 1)),
            "b4": np.zeros(1),
        }

    # --- forward / backward --------------------------------------------------

    def _forward(self, x: np.ndarray, masks=None):
        b = x.shape[0]
        x3 = x[:, :, None]
        col1 = _im2col(x3, KERNEL)  # (B, L1, 3)
        z1 = col1 @ self.params["w1"] + self.params["b1"]
        a1 = np.maximum(z1, 0.0)
        d1 = a1 if masks is None else a1 * masks[0] / (1.0 - self.dropout)
        col2 = _im2col(d1, KERNEL)  # (B, L2, 192)
        z2 = col2 @ self.params["w2"] + self.params["b2"]
        a2 = np.maximum(z2, 0.0)
        d2 = a2 if masks is None else a2 * masks[1] / (1.0 - self.dropout)
        flat = d2.reshape(b, -1)
        z3 = flat @ self.params["w3"] + self.params["b3"]
        a3 = np.maximum(z3, 0.0)
        out = (a3 @ self.params["w4"] + self.params["b4"]).ravel()
        cache = (col1, z1, col2, z2, flat, z3, a3, masks)
        return out, cache

    def loss_and_gradients(self, x: np.ndarray, y: np.ndarray, masks=None):
        """MSE + L2 loss and its analytic gradients for every parameter."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.asarray(y, dtype=float).ravel()
        b = x.shape[0]
        out, (col1, z1, col2, z2, flat, z3, a3, masks) = self._forward(x, masks)
        resid = out - y
        loss = float(np.mean(resid ** 2))
        for key in ("w1", "w2", "w3", "w4"):
            loss += self.l2 * float(np.sum(self.params[key] ** 2))

        g_out = (2.0 * resid / b)[:, None]  # (B, 1)
        grads = {}
        grads["w4"] = a3.T @ g_out + 2.0 * self.l2 * self.params["w4"]
        grads["b4"] = g_out.sum(axis=0)
        g_a3 = g_out @ self.params["w4"].T
        g_z3 = g_a3 * (z3 > 0)
        grads["w3"] = flat.T @ g_z3 + 2.0 * self.l2 * self.params["w3"]
        grads["b3"] = g_z3.sum(axis=0)
        g_flat = g_z3 @ self.params["w3"].T
        g_d2 = g_flat.reshape(b, self.len2, FILTERS)
        if masks is not None:
            g_d2 = g_d2 * masks[1] / (1.0 - self.dropout)
        g_z2 = g_d2 * (z2 > 0)
        grads["w2"] = (col2.reshape(-1, KERNEL * FILTERS).T
                       @ g_z2.reshape(-1, FILTERS)) + 2.0 * self.l2 * self.params["w2"]
        grads["b2"] = g_z2.sum(axis=(0, 1))
        g_col2 = (g_z2 @ self.params["w2"].T).reshape(b, self.len2, KERNEL, FILTERS)
        g_d1 = np.zeros((b, self.len1, FILTERS))
        for j in range(KERNEL):
            g_d1[:, j:j + self.len2, :] += g_col2[:, :, j, :]
        if masks is not None:
            g_d1 = g_d1 * masks[0] / (1.0 - self.dropout)
        g_z1 = g_d1 * (z1 > 0)
        grads["w1"] = (col1.reshape(-1, KERNEL).T
                       @ g_z1.reshape(-1, FILTERS)) + 2.0 * self.l2 * self.params["w1"]
        grads["b1"] = g_z1.sum(axis=(0, 1))
        return loss, grads

    # --- training / inference -------------------------------------------------

    def fit(self, inputs: np.ndarray, targets: np.ndarray, rng: RandomStream,
            learning_rate: float = 1e-3, epochs: int = 100,
            batch_size: int = 16) -> "ConvNet1D":
        x = np.atleast_2d(np.asarray(inputs, dtype=float))
        y = np.asarray(targets, dtype=float).ravel()
        if len(x) == 0:
            raise ValueError("empty training set")
        velocity = {k: np.zeros_like(v) for k, v in self.params.items()}
        n = len(x)
        for _ in range(epochs):
            order = rng.permutation(n)
            for start in range(0, n, batch_size):
                idx = order[start:start + batch_size]
                xb, yb = x[idx], y[idx]
                masks = None
                if self.dropout > 0:
                    masks = (
                        rng.random((len(idx), self.len1, FILTERS)) >= self.dropout,
                        rng.random((len(idx), self.len2, FILTERS)) >= self.dropout,
                    )
                _, grads = self.loss_and_gradients(xb, yb, masks)
                for key, g in grads.items():
                    velocity[key] = MOMENTUM * velocity[key] - learning_rate * g
                    self.params[key] += velocity[key]
        return self

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(inputs, dtype=float))
        out, _ = self._forward(x, masks=None)
        return out
