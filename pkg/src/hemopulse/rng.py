"""Deterministic randomness.

Every stochastic operation in the package draws from an RngStream, a
(seed, stream_id) pair keying a counter-based Philox bit generator.  The
same pair produces the same value sequence on every platform and run;
distinct stream_ids give statistically independent sequences.  Frozen
test vectors in tests/test_rng.py pin the concrete output so an upstream
generator change cannot slip by silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    """One SplitMix64 step; used only to derive child stream seeds."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix(seed: int, stream_id: int) -> int:
    h = _splitmix64(seed & _MASK64)
    return _splitmix64(h ^ (stream_id & _MASK64))


@dataclass(frozen=True)
class RngStream:
    """Key for a deterministic, independently seekable random stream."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = (self.seed & _MASK64) | ((self.stream_id & _MASK64) << 64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RngStream":
        """Child stream: new seed space derived from (seed, stream_id), id = index.

        Children of distinct parents never collide, so nested components
        (benchmark cell -> grid point -> training run) can each own a stream.
        """
        return RngStream(_mix(self.seed, self.stream_id), index)


def as_stream(rng: "RngStream | int") -> RngStream:
    """Accept either a ready stream or a bare integer seed."""
    if isinstance(rng, RngStream):
        return rng
    return RngStream(int(rng))
