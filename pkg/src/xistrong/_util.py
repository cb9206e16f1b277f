from __future__ import annotations

import hashlib
import math

import numpy as np


def round_half_up(x: float) -> int:
    """Round to nearest integer, halves away from zero (inputs here are non-negative)."""
    # the 1e-9 nudge absorbs binary error in products like 0.5 * 75879
    return int(math.floor(x + 0.5 + 1e-9))


def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed from arbitrary printable parts: blake2b-64 of their '|'-joined repr."""
    text = "|".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """PCG64 generator; the only RNG used anywhere in the package."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.PCG64(seed))


def uniform_index(u: np.ndarray, size: np.ndarray) -> np.ndarray:
    """Map uniforms in [0,1) to integer indices in [0, size)."""
    idx = (u * size).astype(np.int64)
    return np.minimum(idx, np.maximum(size - 1, 0))
