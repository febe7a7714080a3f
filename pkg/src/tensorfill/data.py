"""Deterministic mask sampling and synthetic low-rank data.

Randomness comes from a SplitMix64 stream so that masks and synthetic
tensors are reproducible from (dims, parameters, seed) alone, independently
of any platform RNG.
"""

from __future__ import annotations

import math

import numpy as np

from .tensor import ObservationMask

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class Rng:
    """SplitMix64 generator over 64-bit state."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, bound: int) -> int:
        """Draw in [0, bound) by modulo; the slight bias is accepted for the
        sake of a wholly portable stream."""
        return self.next_u64() % bound


def sample_mask(dims: tuple[int, int, int], sr: float, seed: int) -> ObservationMask:
    """Sample round(sr * N) distinct entry offsets, uniformly without
    replacement (partial Fisher-Yates), sorted ascending."""
    if not 0.0 < sr <= 1.0:
        raise ValueError(f"sampling rate must be in (0, 1], got {sr}")
    total = int(dims[0]) * int(dims[1]) * int(dims[2])
    count = int(math.floor(sr * total + 0.5))
    rng = Rng(seed)
    pool = np.arange(total, dtype=np.int64)
    for t in range(count):
        j = rng.next_below(total - t)
        pool[t], pool[t + j] = pool[t + j], pool[t]
    return ObservationMask(dims, np.sort(pool[:count]))


def synth_lowrank(
    dims: tuple[int, int, int], ranks: tuple[int, int, int], seed: int
) -> np.ndarray:
    """Random tensor with fibered rank bounded by ``ranks`` and entries in [0, 1].

    Build r = min(ranks) separable components from positive uniform factors
    (filled row-major from the seeded stream, mode 1 then 2 then 3) and scale
    by the max entry.  Every mode slice is then a product of an (n x r) and
    an (r x m) factor, so each mode rank is at most r, and generically equal
    to r when the ranks agree.
    """
    n1, n2, n3 = (int(d) for d in dims)
    r1, r2, r3 = (int(r) for r in ranks)
    if min(r1, r2, r3) < 1:
        raise ValueError("ranks must be positive")
    limits = (min(n2, n3), min(n3, n1), min(n1, n2))
    for i, (r, lim) in enumerate(zip((r1, r2, r3), limits), start=1):
        if r > lim:
            raise ValueError(
                f"mode-{i} rank {r} exceeds the slice rank limit {lim} for dims {dims}"
            )
    r = min(r1, r2, r3)
    rng = Rng(seed)

    def factor(n: int) -> np.ndarray:
        return np.array([rng.next_float() for _ in range(n * r)]).reshape(n, r)

    u, v, w = factor(n1), factor(n2), factor(n3)
    x = np.einsum("ir,jr,kr->ijk", u, v, w)
    peak = x.max()
    if peak <= 0:
        raise ValueError("degenerate draw produced an all-zero tensor")
    return x / peak
