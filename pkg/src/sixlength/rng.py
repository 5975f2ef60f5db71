"""Deterministic random streams.

Every sampler takes a ``numpy.random.Generator``.  Streams for parallel work
are derived from a root seed plus an integer key path, so a block of trials
always sees the same numbers no matter which worker runs it.
"""
from __future__ import annotations

import secrets

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream ``key`` of ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def fresh_seed() -> int:
    """64-bit seed from OS entropy (echoed by callers so runs can be replayed)."""
    return secrets.randbits(64)
