"""Deterministic per-trial random streams.

Trial t of a suite seeded with s draws from rng_for(s, t); the (seed, index)
pair goes through a fixed splitmix64-style mixer, so trial streams do not
depend on execution order.
"""
from __future__ import annotations

import numpy as np

__all__ = ["mix64", "rng_for"]

_MASK = (1 << 64) - 1


def mix64(*parts: int) -> int:
    """Combine integers into one well-scrambled 64-bit value."""
    h = 0x9E3779B97F4A7C15
    for part in parts:
        h = (h ^ (int(part) & _MASK)) * 0xBF58476D1CE4E5B9 & _MASK
        h ^= h >> 27
        h = h * 0x94D049BB133111EB & _MASK
        h ^= h >> 31
    return h


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(mix64(seed, index)))
