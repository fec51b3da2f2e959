"""Bit-level random-grid sharing.

Secret bits are split into ``n`` share bits.  Bit 1 is opaque, bit 0 is
transparent, and stacking shares is a logical OR.

All functions here are vectorised over pixels: a :class:`RandomSource`
with ``P`` streams drives ``P`` independent pixels at once and the array
functions return shape ``(P, n)``.  The scalar wrappers
(:func:`share_pixel_kk` and friends) are the ``P == 1`` case.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .rng import RandomSource


class Variant(str, enum.Enum):
    CHEN_TSAO = "chentsao"
    WU_SUN = "wusun"
    YAN = "yan"
    SHYU = "shyu"
    GROUPED = "grouped"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "").replace("-", "").replace("&", "")
        for v in cls:
            if v.value == key:
                return v
        raise InvalidParameterError(f"unknown scheme variant {value!r}")


TRADITIONAL = (Variant.CHEN_TSAO, Variant.WU_SUN, Variant.YAN, Variant.SHYU)


@dataclass(frozen=True)
class BitGroupLayout:
    group_count: int
    sizes: tuple

    @classmethod
    def from_sizes(cls, n_prime: int, n: int) -> "BitGroupLayout":
        count = math.ceil(n / n_prime)
        sizes = (n_prime,) * (count - 1) + (n - n_prime * (count - 1),)
        return cls(count, sizes)

    @property
    def last_size(self) -> int:
        return self.sizes[-1]

    def is_complete(self, g: int) -> bool:
        """Whether group ``g`` (0-based) has the full ``n'`` members."""
        return self.sizes[g] == self.sizes[0]

    def group_of(self, index: int) -> int:
        """0-based group of 0-based share ``index``."""
        return index // self.sizes[0]

    def members(self, g: int) -> range:
        start = g * self.sizes[0]
        return range(start, start + self.sizes[g])


@dataclass(frozen=True)
class SchemeParams:
    """Threshold parameters of a sharing scheme.

    ``n_prime`` is the group length of the grouped paradigm.  It defaults
    to ``k`` and is forced to ``n`` for the traditional variants.  ``inner``
    selects the traditional scheme that builds the first group when
    ``n_prime > k``.
    """

    k: int
    n: int
    n_prime: int | None = None
    variant: Variant = Variant.GROUPED
    inner: Variant = Variant.YAN

    def __post_init__(self):
        variant = Variant.parse(self.variant)
        inner = Variant.parse(self.inner)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "inner", inner)
        for name in ("k", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidParameterError(f"{name} must be an integer")
        if variant is not Variant.GROUPED:
            object.__setattr__(self, "n_prime", self.n)
        elif self.n_prime is None:
            object.__setattr__(self, "n_prime", self.k)
        if inner not in TRADITIONAL:
            raise InvalidParameterError("inner scheme must be a traditional variant")
        if self.k < 2:
            raise InvalidParameterError(f"k must be at least 2, got {self.k}")
        if not self.k <= self.n_prime <= self.n:
            raise InvalidParameterError(
                f"need k <= n' <= n, got k={self.k}, n'={self.n_prime}, n={self.n}"
            )

    @property
    def layout(self) -> BitGroupLayout:
        return BitGroupLayout.from_sizes(self.n_prime, self.n)


def _as_secret_array(s, count: int) -> np.ndarray:
    s = np.asarray(s, dtype=np.int64)
    if s.ndim == 0:
        s = np.full(count, int(s), dtype=np.int64)
    if s.shape != (count,):
        raise InvalidParameterError(f"expected {count} secret bits, got shape {s.shape}")
    if ((s != 0) & (s != 1)).any():
        raise InvalidParameterError("secret bits must be 0 or 1")
    return s.astype(np.uint8)


def kk_bits(s, k: int, rng: RandomSource) -> np.ndarray:
    """(k, k) base scheme: ``k - 1`` fair bits, the last fixes the parity to ``s``."""
    if k < 2:
        raise InvalidParameterError(f"k must be at least 2, got {k}")
    s = _as_secret_array(s, len(rng))
    out = np.empty((len(rng), k), dtype=np.uint8)
    acc = s.copy()
    for i in range(k - 1):
        out[:, i] = rng.bits()
        acc ^= out[:, i]
    out[:, k - 1] = acc
    return out


def _draw_without_replacement(pool_size: int, count: int, rng: RandomSource) -> np.ndarray:
    # Sequential selection from the shrinking pool; the picked entry is
    # replaced by the last live one.
    P = len(rng)
    rows = np.arange(P)
    pool = np.tile(np.arange(pool_size), (P, 1))
    picks = np.empty((P, count), dtype=np.int64)
    for d in range(count):
        live = pool_size - d
        j = rng.below(live)
        picks[:, d] = pool[rows, j]
        pool[rows, j] = pool[rows, live - 1]
    return picks


def _permute(bits: np.ndarray, rng: RandomSource) -> np.ndarray:
    P, n = bits.shape
    rows = np.arange(P)
    perm = np.tile(np.arange(n), (P, 1))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        tmp = perm[rows, i].copy()
        perm[rows, i] = perm[rows, j]
        perm[rows, j] = tmp
    return bits[rows[:, None], perm]


def traditional_bits(s, k: int, n: int, variant, rng: RandomSource, *, permute: bool = True) -> np.ndarray:
    """Classic (k, n) assignment of the ``n - k`` extra bits, then a shuffle."""
    variant = Variant.parse(variant)
    if variant not in TRADITIONAL:
        raise InvalidParameterError(f"{variant.value} is not a traditional variant")
    if not 2 <= k <= n:
        raise InvalidParameterError(f"need 2 <= k <= n, got k={k}, n={n}")
    base = kk_bits(s, k, rng)
    P = len(rng)
    out = np.empty((P, n), dtype=np.uint8)
    out[:, :k] = base
    if variant is Variant.CHEN_TSAO:
        for j in range(k, n):
            out[:, j] = rng.bits()
    elif variant is Variant.WU_SUN:
        out[:, k:] = base[:, [k - 1]]
    elif variant is Variant.YAN:
        for j in range(k, n):
            out[:, j] = base[:, j % k]
    else:
        full = (n // k) * k
        for j in range(k, full):
            out[:, j] = base[:, j % k]
        tail = n - full
        if tail:
            picks = _draw_without_replacement(k, tail, rng)
            out[:, full:] = base[np.arange(P)[:, None], picks]
    if permute:
        out = _permute(out, rng)
    return out


def _grouped_with_positions(s, params: SchemeParams, rng: RandomSource):
    """Grouped sharing; also returns the first-group position behind each bit."""
    k, n_prime, n = params.k, params.n_prime, params.n
    P = len(rng)
    if n_prime == k:
        first = kk_bits(s, k, rng)
    else:
        first = traditional_bits(s, k, n_prime, params.inner, rng)
    out = np.empty((P, n), dtype=np.uint8)
    positions = np.empty((P, n), dtype=np.int64)
    out[:, :n_prime] = first
    positions[:, :n_prime] = np.arange(n_prime)
    rows = np.arange(P)[:, None]
    for start in range(n_prime, n, n_prime):
        size = min(n_prime, n - start)
        picks = _draw_without_replacement(n_prime, size, rng)
        positions[:, start:start + size] = picks
        out[:, start:start + size] = first[rows, picks]
    return out, positions


def grouped_bits(s, params: SchemeParams, rng: RandomSource) -> np.ndarray:
    """n'-grouped sharing: later groups re-deal the first group's bits, no global shuffle."""
    if params.variant is not Variant.GROUPED:
        raise InvalidParameterError("grouped sharing needs the grouped variant")
    return _grouped_with_positions(s, params, rng)[0]


def share_bits(s, params: SchemeParams, rng: RandomSource) -> np.ndarray:
    """Dispatch on ``params.variant``; returns shape ``(P, n)``."""
    if params.variant is Variant.GROUPED:
        return grouped_bits(s, params, rng)
    return traditional_bits(s, params.k, params.n, params.variant, rng)


def _scalar(bit) -> int:
    if bit not in (0, 1) or isinstance(bit, float):
        raise InvalidParameterError(f"secret bit must be 0 or 1, got {bit!r}")
    return int(bit)


def _one_stream(rng: RandomSource) -> None:
    if len(rng) != 1:
        raise InvalidParameterError("scalar sharing needs a single-stream source")


def share_pixel_kk(s: int, k: int, rng: RandomSource) -> list:
    _one_stream(rng)
    return kk_bits(_scalar(s), k, rng)[0].tolist()


def share_pixel_traditional(s: int, params: SchemeParams, rng: RandomSource, *, permute: bool = True) -> list:
    _one_stream(rng)
    if params.variant not in TRADITIONAL:
        raise InvalidParameterError(f"{params.variant.value} is not a traditional variant")
    return traditional_bits(_scalar(s), params.k, params.n, params.variant, rng, permute=permute)[0].tolist()


def share_pixel_grouped(s: int, params: SchemeParams, rng: RandomSource) -> list:
    _one_stream(rng)
    return grouped_bits(_scalar(s), params, rng)[0].tolist()


def stack_bits(bits) -> int:
    """OR of a non-empty bit sequence."""
    bits = list(bits)
    if not bits:
        raise InvalidParameterError("cannot stack an empty bit list")
    return int(any(bits))
