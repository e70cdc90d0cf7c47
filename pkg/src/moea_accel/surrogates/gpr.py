"""Gaussian process regression with a squared-exponential kernel.

Zero prior mean; the kernel matrix is factorised once at fit time and
predictions return both the posterior mean and variance.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

MAX_JITTER = 1e-4
MIN_NOISE = 1e-10


class GaussianProcessModel:
    def __init__(self, length_scale: float = 1.0, noise: float = 1e-6,
                 signal_variance: float = 1.0):
        if length_scale <= 0 or signal_variance <= 0:
            raise ValueError("length_scale and signal_variance must be positive")
        self.length_scale = float(length_scale)
        self.noise = max(float(noise), MIN_NOISE)
        self.signal_variance = float(signal_variance)
        self._x: np.ndarray | None = None
        self._chol = None
        self._alpha: np.ndarray | None = None

    def _kernel(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        sq = np.sum(a ** 2, axis=1)[:, None] + np.sum(b ** 2, axis=1)[None, :] \
            - 2.0 * a @ b.T
        np.maximum(sq, 0.0, out=sq)
        return self.signal_variance * np.exp(-0.5 * sq / self.length_scale ** 2)

    def fit(self, inputs: np.ndarray, targets: np.ndarray) -> "GaussianProcessModel":
        x = np.atleast_2d(np.asarray(inputs, dtype=float))
        y = np.asarray(targets, dtype=float).ravel()
        if len(x) == 0:
            raise ValueError("empty training set")
        k = self._kernel(x, x)
        jitter = self.noise
        while True:
            try:
                chol = cho_factor(k + jitter * np.eye(len(x)), lower=True)
                break
            except np.linalg.LinAlgError:
                jitter *= 10.0
                if jitter > MAX_JITTER:
                    cond = np.linalg.cond(k)
                    raise np.linalg.LinAlgError(
                        f"kernel matrix not positive definite even at jitter "
                        f"{MAX_JITTER:g} (condition estimate {cond:.3e})")
        self._x = x
        self._chol = chol
        self._alpha = cho_solve(chol, y)
        return self

    def predict(self, inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and variance at each query row."""
        if self._x is None:
            raise ValueError("model is not fitted")
        q = np.atleast_2d(np.asarray(inputs, dtype=float))
        k_star = self._kernel(q, self._x)
        mean = k_star @ self._alpha
        v = solve_triangular(self._chol[0], k_star.T, lower=True)
        var = self.signal_variance - np.sum(v ** 2, axis=0)
        return mean, np.maximum(var, 0.0)

    def predict_mean(self, inputs: np.ndarray) -> np.ndarray:
        return self.predict(inputs)[0]
