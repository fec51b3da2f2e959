"""Counter-based random source with independent per-pixel substreams.

Every draw is a pure function of ``(seed, stream_id, counter, attempt)``
hashed through the SplitMix64 finaliser, so a pixel's random sequence does
not depend on which other pixels are processed alongside it, in what order,
or on how many threads do the work.

A :class:`RandomSource` holds a vector of stream ids and advances a single
shared counter; each call returns one value per stream.  A scalar source is
simply the one-stream case.
"""

from __future__ import annotations

import os

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def hash64(seed: int, streams: np.ndarray, counter: int, attempt: int = 0) -> np.ndarray:
    """Return the raw 64-bit draw for every stream at ``(counter, attempt)``."""
    key = _mix(np.array([(seed + _GOLDEN) & _MASK], dtype=np.uint64))
    h = _mix(streams ^ key)
    tag = ((counter << 8) | attempt) & _MASK
    return _mix(h + np.uint64((tag * _GOLDEN + _GOLDEN) & _MASK))


def pixel_stream(row, col) -> np.ndarray:
    """Stream id for pixel ``(row, col)``; independent of the image size."""
    row = np.asarray(row, dtype=np.uint64)
    col = np.asarray(col, dtype=np.uint64)
    return (row << np.uint64(32)) | col


def entropy_seed() -> int:
    return int.from_bytes(os.urandom(8), "little")


class RandomSource:
    """Seeded source of uniform bits and bounded integers.

    Parameters
    ----------
    seed : int
        64-bit seed (reduced modulo 2**64).
    stream_id : int or array of int
        One substream per entry.  Identical ``(seed, stream_id)`` pairs
        always replay the same sequence.
    """

    def __init__(self, seed: int, stream_id=0):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
        self.seed = int(seed) & _MASK
        ids = np.atleast_1d(np.asarray(stream_id))
        if ids.ndim != 1:
            raise ValueError("stream_id must be a scalar or a 1-D array")
        self.streams = ids.astype(np.uint64)
        self.counter = 0

    @classmethod
    def for_pixels(cls, seed: int, rows, cols) -> "RandomSource":
        return cls(seed, pixel_stream(rows, cols))

    def __len__(self) -> int:
        return len(self.streams)

    def _next(self) -> int:
        c = self.counter
        self.counter += 1
        return c

    def bits(self) -> np.ndarray:
        """One fair bit per stream (uint8)."""
        u = hash64(self.seed, self.streams, self._next())
        return (u >> np.uint64(63)).astype(np.uint8)

    def below(self, m: int) -> np.ndarray:
        """One integer uniform on ``[0, m)`` per stream, exactly unbiased."""
        if m < 1:
            raise ValueError(f"upper bound must be positive, got {m}")
        counter = self._next()
        if m == 1:
            return np.zeros(len(self.streams), dtype=np.int64)
        u = hash64(self.seed, self.streams, counter)
        excess = (1 << 64) % m
        if excess == 0:
            return (u % np.uint64(m)).astype(np.int64)
        limit = np.uint64((1 << 64) - excess)
        rejected = u >= limit
        attempt = 0
        while rejected.any():
            attempt += 1
            if attempt > 255:  # probability < (m / 2**64) ** 255
                raise RuntimeError("rejection sampling did not terminate")
            retry = hash64(self.seed, self.streams[rejected], counter, attempt)
            u[rejected] = retry
            rejected = u >= limit
        return (u % np.uint64(m)).astype(np.int64)
