"""
Seeded random streams.

Every stochastic operation takes an explicit ``RngStream``. Streams wrap a
numpy ``Generator`` over the counter-based Philox bit generator keyed by a
``SeedSequence``, so identical seeds reproduce identical draws and
``spawn`` yields independent children in a fixed order.
"""
from typing import List

import numpy as np

from errors import ParameterError


class RngStream:
    """A reproducible random stream."""

    def __init__(self, seed: int, _seed_sequence: np.random.SeedSequence = None):
        if seed < 0:
            raise ParameterError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)
        if _seed_sequence is None:
            _seed_sequence = np.random.SeedSequence(self.seed)
        self._seed_sequence = _seed_sequence
        self.generator = np.random.Generator(np.random.Philox(self._seed_sequence))

    def spawn(self, n: int = 1) -> List["RngStream"]:
        """Derive ``n`` independent child streams."""
        return [RngStream(self.seed, child) for child in self._seed_sequence.spawn(n)]

    def child(self) -> "RngStream":
        return self.spawn(1)[0]

    # Thin delegates for the draws used across the code base.

    def normal(self, loc=0.0, scale=1.0, size=None) -> np.ndarray:
        return self.generator.normal(loc, scale, size)

    def uniform(self, low=0.0, high=1.0, size=None) -> np.ndarray:
        return self.generator.uniform(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def random(self, size=None) -> np.ndarray:
        return self.generator.random(size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"
