"""Deterministic RNG stream derivation.

Streams are derived from (master seed, arbitrary key parts) by hashing, so
adding grid points or replications never perturbs existing streams.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master_seed: int, *keys) -> int:
    """Stable 63-bit seed from a master seed and any hashable key parts."""
    h = hashlib.sha256()
    h.update(repr(int(master_seed)).encode())
    for k in keys:
        h.update(b"|")
        h.update(repr(k).encode())
    return int.from_bytes(h.digest()[:8], "little") >> 1


def derive_rng(master_seed: int, *keys) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, *keys))
