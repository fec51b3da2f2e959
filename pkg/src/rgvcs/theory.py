"""Exact contrast of the n'-grouped scheme.

Stacking ``t`` shadows selects ``lambda_j`` of them from group ``j``.  Up to
reordering (which does not change anything) the selection is described by
a descending *valid partition* of ``t``.  For each such class this module
computes the distribution of the number of distinct base bits hit, the
resulting transmissions and contrast, the probability that a uniformly
random ``t``-subset of shadows falls in the class, and the expected
contrast over all classes.

Everything is :class:`fractions.Fraction`; floats appear only when a
caller renders a report.

Two engines are provided.  The closed forms (compliant-matrix counts and
multinomial class weights) only apply when ``n' == k``.  The enumeration
engine works for any ``n'`` by convolving per-group subset distributions,
and is bounded by an explicit state budget.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, prod

from .errors import BudgetExceededError, InvalidParameterError
from .sharing import SchemeParams, Variant

DEFAULT_BUDGET = 10**7
MAX_FREE_CELLS = 30


def _check_grouped(params: SchemeParams) -> None:
    if params.variant is not Variant.GROUPED:
        raise InvalidParameterError("contrast theory covers the grouped variant only")


def valid_partitions(t: int, params: SchemeParams) -> list:
    """Descending valid partitions of ``t`` over the scheme's groups.

    A descending tuple is kept when every part fits in a group of ``n'``
    and some arrangement fits the (possibly smaller) last group, i.e. the
    smallest part is no larger than the last group.
    """
    layout = params.layout
    if not 1 <= t <= params.n:
        raise InvalidParameterError(f"t must lie in 1..{params.n}, got {t}")
    m, cap, last = layout.group_count, params.n_prime, layout.last_size
    found = []

    def grow(prefix, remaining, ceiling):
        slots = m - len(prefix)
        if slots == 0:
            if remaining == 0 and prefix[-1] <= last:
                found.append(tuple(prefix))
            return
        if remaining > ceiling * slots:
            return
        for part in range(min(ceiling, remaining), -1, -1):
            prefix.append(part)
            grow(prefix, remaining - part, part)
            prefix.pop()

    grow([], t, cap)
    return found


def canonical_last_row(x: int, weight: int) -> tuple:
    return (1,) * weight + (0,) * (x - weight)


def compliant_matrix_count(lam, x: int, last_row=None) -> int:
    """Number of 0/1 matrices with ``len(lam)`` rows and ``x`` columns whose
    last row is ``last_row``, whose row sums are ``lam`` and whose every
    column holds at least one 1.

    Filled cell by cell with backtracking on the row sums.  ``last_row``
    defaults to ``(1,...,1,0,...,0)`` of weight ``lam[-1]``.
    """
    lam = tuple(int(v) for v in lam)
    rows = len(lam)
    if rows < 1 or x < 1:
        raise InvalidParameterError("need at least one row and one column")
    if x > sum(lam):
        raise InvalidParameterError(f"x={x} exceeds the partition total {sum(lam)}")
    if last_row is None:
        if lam[-1] > x:
            raise InvalidParameterError(f"last row weight {lam[-1]} exceeds x={x}")
        last_row = canonical_last_row(x, lam[-1])
    last_row = tuple(int(v) for v in last_row)
    if len(last_row) != x or any(v not in (0, 1) for v in last_row):
        raise InvalidParameterError(f"last row must be a 0/1 vector of length {x}")
    if sum(last_row) != lam[-1]:
        raise InvalidParameterError(
            f"last row weight {sum(last_row)} does not match lambda_last={lam[-1]}"
        )
    if (rows - 1) * x > MAX_FREE_CELLS:
        raise BudgetExceededError("compliant-matrix backtracking", 2 ** ((rows - 1) * x), 2**MAX_FREE_CELLS)

    col_hits = list(last_row)

    def uncovered() -> int:
        return sum(1 for v in col_hits if v == 0)

    def backtrack(r: int, c: int, row_ones: int) -> int:
        if r == rows - 1:
            return 1 if uncovered() == 0 else 0
        if c == x:
            if row_ones != lam[r]:
                return 0
            if uncovered() > sum(lam[r + 1:rows - 1]):
                return 0
            return backtrack(r + 1, 0, 0)
        if row_ones + (x - c) < lam[r]:
            return 0
        total = 0
        if row_ones < lam[r]:
            col_hits[c] += 1
            total += backtrack(r, c + 1, row_ones + 1)
            col_hits[c] -= 1
        total += backtrack(r, c + 1, row_ones)
        return total

    return backtrack(0, 0, 0)


def _closed_precondition(lam, params: SchemeParams) -> tuple:
    _check_grouped(params)
    if params.n_prime != params.k:
        raise InvalidParameterError("closed forms need n' == k; use the enumeration engine")
    lam = tuple(lam)
    if len(lam) != params.layout.group_count:
        raise InvalidParameterError(f"partition needs {params.layout.group_count} parts")
    return lam


def prob_distinct_closed(lam, x: int, params: SchemeParams) -> Fraction:
    """Pr(#distinct base bits = x) via compliant-matrix counts (``n' == k``)."""
    lam = _closed_precondition(lam, params)
    k = params.k
    last = lam[-1]
    if not 1 <= x <= k:
        raise InvalidParameterError(f"x must lie in 1..{k}")
    if x < max(lam) or x > sum(lam):
        return Fraction(0)
    count = compliant_matrix_count(lam, x)
    denom = prod(comb(k, part) for part in lam[:-1])
    return Fraction(comb(k - last, x - last) * count, denom)


def distinct_distribution_closed(lam, params: SchemeParams) -> dict:
    return {x: prob_distinct_closed(lam, x, params) for x in range(1, params.k + 1)}


def base_index_map(params: SchemeParams) -> tuple:
    """Base-bit index carried by each position of the first group, before
    its shuffle."""
    k, n_prime = params.k, params.n_prime
    if n_prime == k:
        return tuple(range(k))
    if params.inner is Variant.YAN:
        return tuple(p % k for p in range(n_prime))
    if params.inner is Variant.WU_SUN:
        return tuple(min(p, k - 1) for p in range(n_prime))
    raise InvalidParameterError(
        f"no fixed index multiset for inner scheme {params.inner.value}; use yan or wusun"
    )


def distinct_distribution_enumerated(lam, params: SchemeParams, budget: int = DEFAULT_BUDGET) -> dict:
    """Exact distribution of #distinct base bits for any ``n'``.

    Each group contributes a uniform ``lam_j``-subset of first-group
    positions; per-group outcomes are folded into a table keyed by the set
    of base bits seen so far.
    """
    _check_grouped(params)
    lam = tuple(lam)
    n_prime, k = params.n_prime, params.k
    if len(lam) != params.layout.group_count:
        raise InvalidParameterError(f"partition needs {params.layout.group_count} parts")
    if any(part < 0 or part > n_prime for part in lam):
        raise InvalidParameterError(f"parts must lie in 0..{n_prime}")
    size = prod(comb(n_prime, part) for part in lam)
    if size > budget:
        raise BudgetExceededError("distinct-index enumeration", size, budget)
    index = base_index_map(params)
    states = Counter({0: 1})
    for part in lam:
        local = Counter()
        for chosen in itertools.combinations(range(n_prime), part):
            mask = 0
            for p in chosen:
                mask |= 1 << index[p]
            local[mask] += 1
        merged = Counter()
        for seen, a in states.items():
            for mask, b in local.items():
                merged[seen | mask] += a * b
        states = merged
    dist = {x: Fraction(0) for x in range(1, k + 1)}
    for mask, count in states.items():
        hits = bin(mask).count("1")
        if hits:
            dist[hits] += Fraction(count, size)
    return dist


def prob_distinct_enumerated(lam, x: int, params: SchemeParams, budget: int = DEFAULT_BUDGET) -> Fraction:
    return distinct_distribution_enumerated(lam, params, budget)[x]


def partition_contrast(lam, k: int, probs: dict) -> tuple:
    """Transmissions of white/black pixels and the contrast for one class.

    Returns ``(t0, t1, alpha)``.
    """
    probs = {int(x): Fraction(p) for x, p in probs.items()}
    if sum(probs.values()) != 1:
        raise InvalidParameterError("distinct-count probabilities must sum to 1")
    if any(x < 1 or x > k for x, p in probs.items() if p):
        raise InvalidParameterError(f"distinct counts must lie in 1..{k}")
    partial = sum((probs.get(g, Fraction(0)) / 2**g for g in range(1, k)), Fraction(0))
    full = probs.get(k, Fraction(0)) / 2 ** (k - 1)
    t0 = full + partial
    t1 = partial
    return t0, t1, full / (1 + t1)


def multiset_signature(lam) -> list:
    """``[(value, multiplicity), ...]`` in descending value order."""
    counts = Counter(lam)
    return sorted(counts.items(), reverse=True)


def partition_weight_closed(lam, t: int, params: SchemeParams) -> Fraction:
    """Probability that a uniform ``t``-subset of shadows falls in class ``[lam]``
    (``n' == k``): sum over the value placed in the last group."""
    lam = _closed_precondition(lam, params)
    if sum(lam) != t:
        raise InvalidParameterError(f"partition sums to {sum(lam)}, not t={t}")
    k, m, last = params.k, len(lam), params.layout.last_size
    signature = multiset_signature(lam)
    total = 0
    for g, (value, mult) in enumerate(signature):
        rest = list(lam)
        rest.remove(value)
        ways = comb(last, value) * prod(comb(k, part) for part in rest)
        arrangements = factorial(m - 1)
        for h, (_, d) in enumerate(signature):
            arrangements //= factorial(d - 1 if h == g else d)
        total += ways * arrangements
    return Fraction(total, comb(params.n, t))


def partition_weight_enumerated(lam, t: int, params: SchemeParams, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Class weight by summing over every per-group arrangement of ``lam``."""
    _check_grouped(params)
    lam = tuple(sorted(lam, reverse=True))
    if sum(lam) != t:
        raise InvalidParameterError(f"partition sums to {sum(lam)}, not t={t}")
    size = comb(params.n, t)
    if size > budget:
        raise BudgetExceededError("class-weight enumeration", size, budget)
    # Deal the parts of lam to the groups one group at a time; a state is
    # the multiset of parts still to be placed.
    states = Counter({lam: 1})
    for group_size in params.layout.sizes:
        merged = Counter()
        for remaining, ways in states.items():
            for i, part in enumerate(remaining):
                if i and remaining[i - 1] == part:
                    continue
                rest = remaining[:i] + remaining[i + 1:]
                merged[rest] += ways * comb(group_size, part)
        states = merged
    return Fraction(states[()], size)


@dataclass(frozen=True)
class ClassContrast:
    partition: tuple
    probs: dict
    t0: Fraction
    t1: Fraction
    alpha: Fraction
    beta: Fraction


@dataclass
class ContrastBreakdown:
    params: SchemeParams
    t: int
    engine: str
    classes: list = field(default_factory=list)

    @property
    def gamma(self) -> Fraction:
        return sum((c.beta * c.alpha for c in self.classes), Fraction(0))

    def as_dict(self) -> dict:
        return {c.partition: (c.alpha, c.beta) for c in self.classes}


def _resolve_engine(engine: str, params: SchemeParams) -> str:
    if engine not in ("auto", "closed", "enumerated"):
        raise InvalidParameterError(f"unknown engine {engine!r}")
    if engine == "auto":
        return "closed" if params.n_prime == params.k else "enumerated"
    if engine == "closed" and params.n_prime != params.k:
        raise InvalidParameterError("closed engine needs n' == k")
    return engine


def scheme_contrast(params: SchemeParams, t: int, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> ContrastBreakdown:
    """Per-class contrast and weight, sorted by decreasing contrast, plus
    the expected contrast ``gamma``."""
    _check_grouped(params)
    engine = _resolve_engine(engine, params)
    classes = []
    for lam in valid_partitions(t, params):
        if engine == "closed":
            probs = distinct_distribution_closed(lam, params)
            beta = partition_weight_closed(lam, t, params)
        else:
            probs = distinct_distribution_enumerated(lam, params, budget)
            beta = partition_weight_enumerated(lam, t, params, budget)
        t0, t1, alpha = partition_contrast(lam, params.k, probs)
        classes.append(ClassContrast(lam, probs, t0, t1, alpha, beta))
    classes.sort(key=lambda c: (c.alpha, c.partition), reverse=True)
    return ContrastBreakdown(params=params, t=t, engine=engine, classes=classes)
