"""Seeded random streams.

Every stochastic operation in the library consumes draws from an explicitly
passed stream, so a run is fully determined by its seed.
"""

from __future__ import annotations

import numpy as np


class RandomStream:
    """A seeded random generator with deterministic child-stream derivation.

    The same seed always yields the same draw sequence, and `split()` yields
    an independent child stream whose sequence depends only on the parent
    seed and the number of prior splits.
    """

    def __init__(self, seed: int, _seedseq: np.random.SeedSequence | None = None):
        self.seed = int(seed)
        self._seedseq = _seedseq if _seedseq is not None else np.random.SeedSequence(self.seed)
        self.gen = np.random.Generator(np.random.PCG64(self._seedseq))

    def split(self) -> "RandomStream":
        """Derive a deterministic, independent child stream."""
        child = self._seedseq.spawn(1)[0]
        return RandomStream(self.seed, _seedseq=child)

    # Thin delegation; keeps call sites compact and greppable.
    def random(self, size=None):
        return self.gen.random(size)

    def integers(self, low, high=None, size=None):
        return self.gen.integers(low, high, size=size)

    def uniform(self, low, high, size=None):
        return self.gen.uniform(low, high, size=size)

    def choice(self, a, size=None, replace=True):
        return self.gen.choice(a, size=size, replace=replace)

    def permutation(self, x):
        return self.gen.permutation(x)

    def shuffle(self, x) -> None:
        self.gen.shuffle(x)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed})"
