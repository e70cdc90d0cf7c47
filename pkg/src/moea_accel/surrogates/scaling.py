"""Per-feature minimax rescaling to [0, 1]."""

from __future__ import annotations

import numpy as np


class MinimaxScaler:
    """Rescales each feature by subtracting its minimum and dividing by its
    range; a zero-range feature maps to the constant 0."""

    def __init__(self):
        self.min_: np.ndarray | None = None
        self.range_: np.ndarray | None = None

    def fit(self, data: np.ndarray) -> "MinimaxScaler":
        data = np.atleast_2d(np.asarray(data, dtype=float))
        self.min_ = data.min(axis=0)
        self.range_ = data.max(axis=0) - self.min_
        return self

    def transform(self, data: np.ndarray) -> np.ndarray:
        if self.min_ is None:
            raise ValueError("scaler is not fitted")
        data = np.atleast_2d(np.asarray(data, dtype=float))
        safe = np.where(self.range_ > 0, self.range_, 1.0)
        out = (data - self.min_) / safe
        return np.where(self.range_ > 0, out, 0.0)

    def fit_transform(self, data: np.ndarray) -> np.ndarray:
        return self.fit(data).transform(data)

    def inverse_transform(self, data: np.ndarray) -> np.ndarray:
        if self.min_ is None:
            raise ValueError("scaler is not fitted")
        data = np.asarray(data, dtype=float)
        return data * self.range_ + self.min_
