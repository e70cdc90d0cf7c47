"""Random forest regression, backed by scikit-learn.

The prediction is the arithmetic mean of the individual tree outputs; trees
are trained on bootstrap samples with per-split random feature subsets.
"""

from __future__ import annotations

import numpy as np
from sklearn.ensemble import RandomForestRegressor

from ..rng import RandomStream


class RandomForestModel:
    def __init__(self, n_estimators: int = 100, max_depth: int | None = None,
                 min_samples_split: int = 2, bootstrap: bool = True,
                 max_features="sqrt"):
        self.params = dict(n_estimators=n_estimators, max_depth=max_depth,
                           min_samples_split=min_samples_split,
                           bootstrap=bootstrap, max_features=max_features)
        self.forest: RandomForestRegressor | None = None

    def fit(self, inputs: np.ndarray, targets: np.ndarray, rng: RandomStream) -> "RandomForestModel":
        x = np.atleast_2d(np.asarray(inputs, dtype=float))
        y = np.asarray(targets, dtype=float).ravel()
        if len(x) == 0:
            raise ValueError("empty training set")
        self.forest = RandomForestRegressor(
            random_state=int(rng.integers(0, 2 ** 31 - 1)), **self.params)
        self.forest.fit(x, y)
        return self

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        if self.forest is None:
            raise ValueError("model is not fitted")
        return self.forest.predict(np.atleast_2d(np.asarray(inputs, dtype=float)))

    def per_tree_predictions(self, inputs: np.ndarray) -> np.ndarray:
        """(trees, rows) matrix of individual tree outputs."""
        x = np.atleast_2d(np.asarray(inputs, dtype=float))
        return np.array([tree.predict(x) for tree in self.forest.estimators_])
