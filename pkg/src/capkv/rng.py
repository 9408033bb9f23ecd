"""Seeded random-number streams.

All randomness in the toolkit flows through `make_rng`, built on the
counter-based Philox bit generator: a (seed, *stream) tuple fully determines
the stream, so results are reproducible bit-for-bit on one platform and
independent streams can be derived for parallel work without coordination.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return a Generator keyed by `seed` and an optional sub-stream path."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    if any(s < 0 for s in stream):
        raise ValueError("stream ids must be non-negative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))
