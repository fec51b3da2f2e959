"""Measured light transmission and contrast of recovered images."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError
from .image import ShadowSet, check_binary_image

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class ContrastMeasurement:
    t_white: float
    t_black: float
    alpha: float


@dataclass(frozen=True)
class SweepRow:
    combination: tuple
    layer: tuple
    alpha: float

    @property
    def label(self) -> str:
        return "-".join(str(i) for i in self.combination)


def light_transmission(image) -> float:
    """Fraction of transparent (0) pixels."""
    image = check_binary_image(image)
    return float(np.count_nonzero(image == 0)) / image.size


def measure_contrast(secret, recovered) -> ContrastMeasurement:
    secret = check_binary_image(secret, "secret")
    recovered = check_binary_image(recovered, "recovered")
    if secret.shape != recovered.shape:
        raise InvalidParameterError(f"shape mismatch: {secret.shape} vs {recovered.shape}")
    white = secret == 0
    n_white = int(np.count_nonzero(white))
    n_black = secret.size - n_white
    if n_white == 0 or n_black == 0:
        raise InvalidParameterError("secret needs both white and black pixels")
    t_white = float(np.count_nonzero(white & (recovered == 0))) / n_white
    t_black = float(np.count_nonzero(~white & (recovered == 0))) / n_black
    return ContrastMeasurement(t_white, t_black, (t_white - t_black) / (1 + t_black))


class _StackMeter:
    # Stack shadows and count transparent pixels per secret region without
    # re-validating the same arrays for every combination.
    def __init__(self, secret, shadows: np.ndarray):
        secret = check_binary_image(secret, "secret")
        if shadows.shape[1:] != secret.shape:
            raise InvalidParameterError("shadows and secret differ in size")
        self.white = secret == 0
        self.n_white = int(np.count_nonzero(self.white))
        self.n_black = secret.size - self.n_white
        if self.n_white == 0 or self.n_black == 0:
            raise InvalidParameterError("secret needs both white and black pixels")
        self.shadows = shadows.astype(bool)

    def alpha(self, combination) -> float:
        stacked = np.logical_or.reduce(self.shadows[[i - 1 for i in combination]], axis=0)
        clear = ~stacked
        tw = np.count_nonzero(clear & self.white) / self.n_white
        tb = np.count_nonzero(clear & ~self.white) / self.n_black
        return (tw - tb) / (1 + tb)


def layer_of(combination, shadow_set: ShadowSet) -> tuple:
    """Per-group shadow counts of a combination, largest first."""
    counts = [0] * shadow_set.layout.group_count
    for i in combination:
        counts[shadow_set.group_of(i) - 1] += 1
    return tuple(sorted(counts, reverse=True))


def combination_sweep(secret, shadow_set: ShadowSet, t: int, budget: int = DEFAULT_BUDGET) -> list:
    """Measured contrast of every ``t``-combination of shadows, in lexicographic order."""
    n = len(shadow_set)
    if not 1 <= t <= n:
        raise InvalidParameterError(f"t must lie in 1..{n}")
    total = math.comb(n, t)
    if total > budget:
        raise BudgetExceededError("combination sweep", total, budget)
    meter = _StackMeter(secret, shadow_set.shadows)
    return [
        SweepRow(combo, layer_of(combo, shadow_set), meter.alpha(combo))
        for combo in itertools.combinations(range(1, n + 1), t)
    ]


def mean_contrast(secret, shadow_set: ShadowSet, t: int, budget: int = DEFAULT_BUDGET) -> float:
    rows = combination_sweep(secret, shadow_set, t, budget)
    return sum(r.alpha for r in rows) / len(rows)


def layer_means(rows) -> dict:
    """``{layer: (count, mean alpha)}`` over sweep rows."""
    groups = {}
    for row in rows:
        groups.setdefault(row.layer, []).append(row.alpha)
    return {layer: (len(vals), sum(vals) / len(vals)) for layer, vals in groups.items()}


def format_partition(lam) -> str:
    return "(" + ",".join(str(v) for v in lam) + ")"


def sweep_csv(rows) -> str:
    lines = ["combination;layer_partition;alpha"]
    lines += [f"{r.label};{format_partition(r.layer)};{r.alpha:.6f}" for r in rows]
    return "\n".join(lines) + "\n"
