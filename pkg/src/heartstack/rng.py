"""Deterministic random-stream derivation.

Every stochastic component draws from its own generator, derived from a
master seed plus a fixed key (tree index, epoch index, purpose tag, ...).
Streams are therefore reproducible regardless of evaluation order, which
is what makes parallel and sequential fits interchangeable.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key_part(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf8"))
    return int(part) & 0xFFFFFFFF


def stream(seed: int, *key) -> np.random.Generator:
    """Independent generator for (seed, key); same inputs, same stream."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_key_part(p) for p in key))
    return np.random.Generator(np.random.PCG64(ss))
