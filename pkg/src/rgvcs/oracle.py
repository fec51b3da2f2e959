"""Brute-force and Monte-Carlo reference values.

Nothing here imports the contrast engine: the exact oracles walk every
concrete selection of shadows and bits, and the simulation runs the real
sharing code and ORs the chosen share bits.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError
from .rng import RandomSource
from .sharing import SchemeParams, Variant, share_bits

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    estimate: float
    stderr: float
    target: Fraction | None = None

    def sigmas_from(self, value) -> float:
        """Distance of the estimate from ``value`` in standard errors."""
        gap = abs(self.estimate - float(value))
        if self.stderr == 0:
            return 0.0 if gap == 0 else math.inf
        return gap / self.stderr


def _first_group_indices(params: SchemeParams) -> list:
    k, n_prime = params.k, params.n_prime
    if n_prime == k:
        return list(range(k))
    if params.inner is Variant.YAN:
        return [p % k for p in range(n_prime)]
    if params.inner is Variant.WU_SUN:
        return [k - 1 if p >= k else p for p in range(n_prime)]
    raise InvalidParameterError(f"no fixed index multiset for inner {params.inner.value}")


def exhaustive_distinct_distribution(lam, params: SchemeParams, budget: int = DEFAULT_BUDGET) -> dict:
    """Distribution of #distinct base bits for ``lam`` given in group order.

    Complete groups are permutations of the first group, so picking
    ``lam_j`` of their shadows picks a ``lam_j``-subset of first-group
    positions.  The incomplete last group is enumerated literally: every
    ordered draw of its members from the first group, then every
    ``lam_last``-subset of those members.
    """
    lam = tuple(lam)
    layout = params.layout
    n_prime = params.n_prime
    if len(lam) != layout.group_count:
        raise InvalidParameterError(f"partition needs {layout.group_count} parts")
    for part, size in zip(lam, layout.sizes):
        if not 0 <= part <= size:
            raise InvalidParameterError(f"part {part} does not fit a group of {size}")
    index = _first_group_indices(params)

    choices = []
    for g, part in enumerate(lam):
        size = layout.sizes[g]
        if size == n_prime:
            options = [frozenset(index[p] for p in c) for c in itertools.combinations(range(n_prime), part)]
        else:
            options = []
            for members in itertools.permutations(range(n_prime), size):
                for c in itertools.combinations(members, part):
                    options.append(frozenset(index[p] for p in c))
        choices.append(options)
    total = math.prod(len(o) for o in choices)
    if total > budget:
        raise BudgetExceededError("exhaustive selection", total, budget)

    counts = Counter()
    for combo in itertools.product(*choices):
        counts[len(frozenset().union(*combo))] += 1
    return {x: Fraction(counts.get(x, 0), total) for x in range(1, params.k + 1)}


def exhaustive_class_weights(params: SchemeParams, t: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Fraction of ``t``-subsets of shadows in each descending group-count class."""
    n = params.n
    if not 1 <= t <= n:
        raise InvalidParameterError(f"t must lie in 1..{n}")
    total = math.comb(n, t)
    if total > budget:
        raise BudgetExceededError("subset enumeration", total, budget)
    layout = params.layout
    counts = Counter()
    for subset in itertools.combinations(range(n), t):
        per_group = [0] * layout.group_count
        for i in subset:
            per_group[layout.group_of(i)] += 1
        counts[tuple(sorted(per_group, reverse=True))] += 1
    return {lam: Fraction(c, total) for lam, c in counts.items()}


@functools.lru_cache(maxsize=32)
def _upper_blocks(rows: int, x: int):
    # Every 0/1 upper block of shape (rows-1, x): its row sums and column cover.
    cells = (rows - 1) * x
    codes = np.arange(1 << cells, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(cells)) & 1).astype(bool).reshape(len(codes), rows - 1, x)
    return bits.sum(axis=2), bits.any(axis=1)


def brute_force_compliant_count(lam, x: int, last_row) -> int:
    """Count compliant matrices by trying every upper block."""
    lam = tuple(int(v) for v in lam)
    rows = len(lam)
    last = np.asarray(last_row, dtype=bool)
    if last.shape != (x,):
        raise InvalidParameterError(f"last row must have {x} entries")
    if int(last.sum()) != lam[-1]:
        return 0
    if rows == 1:
        return int(last.all())
    if (rows - 1) * x > 24:
        raise BudgetExceededError("brute-force matrices", 1 << ((rows - 1) * x), 1 << 24)
    row_sums, cover = _upper_blocks(rows, x)
    ok = (row_sums == np.array(lam[:-1])).all(axis=1) & (cover | last).all(axis=1)
    return int(np.count_nonzero(ok))


def simulate_stack_transmission(params: SchemeParams, indices, s: int, trials: int, seed: int = 0,
                                target=None) -> SimulationReport:
    """Estimate Pr(stacked bit == 0) for the 1-based share ``indices``.

    Each trial shares one fresh secret pixel on its own substream.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be positive")
    idx = sorted(set(int(i) for i in indices))
    if not idx or idx[0] < 1 or idx[-1] > params.n or len(idx) != len(list(indices)):
        raise InvalidParameterError(f"indices must be distinct values in 1..{params.n}")
    rng = RandomSource(seed, np.arange(trials, dtype=np.uint64))
    bits = share_bits(int(s), params, rng)
    stacked = np.bitwise_or.reduce(bits[:, [i - 1 for i in idx]], axis=1)
    p = float(np.mean(stacked == 0))
    return SimulationReport(trials, p, math.sqrt(p * (1 - p) / trials), target)
