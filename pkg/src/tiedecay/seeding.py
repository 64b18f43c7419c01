"""Reproducible random-stream derivation.

Every stochastic routine in this package derives its generators from a
master seed plus an integer path, e.g. ``substream(seed, realization)``.
Streams are independent and depend only on the identifying integers, never
on scheduling or worker count, so ensemble results are reproducible under
any degree of parallelism.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator identified by ``(seed, *path)``."""
    entropy = (int(seed),) + tuple(int(p) for p in path)
    return np.random.default_rng(np.random.SeedSequence(entropy))
