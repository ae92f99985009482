"""Reproducible random streams.

Counter-based Philox generators keyed by (seed, *key) produce identical
streams on every platform, and parallel workers can draw from disjoint
substreams by extending the key — results then never depend on worker
count or scheduling order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["philox_gen"]


def philox_gen(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
