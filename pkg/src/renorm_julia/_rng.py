"""Counter-based seeded uniforms: sample i depends only on (seed, i)."""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _generator(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(int(seed) ^ int(index)) & _MASK64))


def uniforms(seed: int, count: int, start: int = 0) -> np.ndarray:
    """One uniform in [0, 1) per index start..start+count-1."""
    return np.array([_generator(seed, i).random() for i in range(start, start + count)])


def digit_stream(seed: int, index: int, base: int, length: int) -> np.ndarray:
    """``length`` uniform digits in 0..base-1 for stream (seed, index)."""
    return _generator(seed, index).integers(0, base, size=length)
