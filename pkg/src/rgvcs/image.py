"""Whole-image sharing and OR-stacking recovery.

Images are 2-D ``uint8`` numpy arrays holding 0 (transparent) and 1
(opaque).  Each pixel draws from its own substream keyed by its
coordinates, so the shadows do not depend on how rows are split across
worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .rng import RandomSource
from .sharing import BitGroupLayout, InvalidParameterError, SchemeParams, share_bits


def check_binary_image(image, name: str = "image") -> np.ndarray:
    """Validate and return ``image`` as a 2-D uint8 array of 0/1."""
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise InvalidParameterError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidParameterError(f"{name} has a zero dimension: {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    if not np.issubdtype(arr.dtype, np.integer):
        raise InvalidParameterError(f"{name} must hold integers 0/1, got dtype {arr.dtype}")
    if ((arr != 0) & (arr != 1)).any():
        raise InvalidParameterError(f"{name} is not binary; threshold it first")
    return arr.astype(np.uint8, copy=False)


@dataclass
class ShadowSet:
    params: SchemeParams
    seed: int
    shadows: np.ndarray  # (n, h, w) uint8

    @property
    def layout(self) -> BitGroupLayout:
        return self.params.layout

    @property
    def shape(self) -> tuple:
        return self.shadows.shape[1:]

    def __len__(self) -> int:
        return self.shadows.shape[0]

    def __getitem__(self, index: int) -> np.ndarray:
        """1-based access, matching the shadow numbering SC_1..SC_n."""
        if not 1 <= index <= len(self):
            raise IndexError(f"shadow index {index} outside 1..{len(self)}")
        return self.shadows[index - 1]

    def group_of(self, index: int) -> int:
        """1-based group number of 1-based shadow ``index``."""
        return self.layout.group_of(index - 1) + 1

    def select(self, indices) -> list:
        return [self[i] for i in indices]


def _share_rows(secret: np.ndarray, params: SchemeParams, seed: int, r0: int, r1: int) -> np.ndarray:
    w = secret.shape[1]
    rows, cols = np.meshgrid(np.arange(r0, r1), np.arange(w), indexing="ij")
    rng = RandomSource.for_pixels(seed, rows.ravel(), cols.ravel())
    bits = share_bits(secret[r0:r1].ravel(), params, rng)
    return bits.T.reshape(params.n, r1 - r0, w)


def share_image(secret, params: SchemeParams, seed: int, *, n_jobs: int = 1, chunk_rows: int = 64) -> ShadowSet:
    """Encrypt every pixel of ``secret`` independently into ``n`` shadows.

    ``n_jobs > 1`` shares row blocks on a thread pool; the result is
    bit-identical to the sequential run.
    """
    secret = check_binary_image(secret, "secret")
    if n_jobs < 1:
        raise InvalidParameterError("n_jobs must be at least 1")
    h, w = secret.shape
    shadows = np.empty((params.n, h, w), dtype=np.uint8)
    blocks = [(r, min(r + chunk_rows, h)) for r in range(0, h, chunk_rows)]

    def work(block):
        r0, r1 = block
        shadows[:, r0:r1] = _share_rows(secret, params, seed, r0, r1)

    if n_jobs == 1:
        for block in blocks:
            work(block)
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(work, blocks))
    return ShadowSet(params=params, seed=int(seed), shadows=shadows)


def recover_image(shadows) -> np.ndarray:
    """Superimpose (pixel-wise OR) a non-empty collection of shadows."""
    shadows = list(shadows)
    if not shadows:
        raise InvalidParameterError("need at least one shadow to stack")
    first = check_binary_image(shadows[0], "shadow")
    out = first.copy()
    for other in shadows[1:]:
        other = check_binary_image(other, "shadow")
        if other.shape != out.shape:
            raise InvalidParameterError(f"shadow shapes differ: {out.shape} vs {other.shape}")
        out |= other
    return out


def half_white_secret(height: int = 512, width: int = 512) -> np.ndarray:
    """Left half transparent, right half opaque."""
    secret = np.zeros((height, width), dtype=np.uint8)
    secret[:, width // 2:] = 1
    return secret
