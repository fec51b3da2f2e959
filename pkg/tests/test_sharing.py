import itertools
from collections import Counter

import numpy as np
import pytest

from rgvcs.errors import InvalidParameterError
from rgvcs.rng import RandomSource
from rgvcs.sharing import (
    BitGroupLayout,
    SchemeParams,
    Variant,
    _grouped_with_positions,
    grouped_bits,
    kk_bits,
    share_pixel_grouped,
    share_pixel_kk,
    share_pixel_traditional,
    stack_bits,
    traditional_bits,
)


# -- (k, k) base scheme -------------------------------------------------------

def test_kk_forced_examples(scripted):
    assert share_pixel_kk(0, 2, scripted(bits=[1])) == [1, 1]
    assert share_pixel_kk(1, 3, scripted(bits=[0, 1])) == [0, 1, 0]


def test_kk_rejects_k_below_two():
    with pytest.raises(InvalidParameterError):
        share_pixel_kk(0, 1, RandomSource(0))
    with pytest.raises(InvalidParameterError):
        SchemeParams(k=1, n=3)


@pytest.mark.parametrize("k", range(2, 7))
def test_kk_parity_exhaustive(scripted, k):
    for s in (0, 1):
        for pattern in itertools.product((0, 1), repeat=k - 1):
            bits = share_pixel_kk(s, k, scripted(bits=pattern))
            assert bits[:-1] == list(pattern)
            assert np.bitwise_xor.reduce(bits) == s


@pytest.mark.parametrize("k", range(2, 7))
def test_kk_fewer_than_k_bits_reveal_nothing(scripted, k):
    # Enumerate every rng pattern: for each q < k subset of positions the
    # joint distribution of the selected bits must not depend on s.
    outputs = {s: [share_pixel_kk(s, k, scripted(bits=p)) for p in itertools.product((0, 1), repeat=k - 1)]
               for s in (0, 1)}
    for q in range(1, k):
        for positions in itertools.combinations(range(k), q):
            dists = [Counter(tuple(b[i] for i in positions) for b in outputs[s]) for s in (0, 1)]
            assert dists[0] == dists[1]


def test_kk_two_bit_stack_transmission():
    rng = RandomSource(123, np.arange(100_000))
    bits = kk_bits(0, 2, rng)
    white = np.mean((bits[:, 0] | bits[:, 1]) == 0)
    assert abs(white - 0.5) < 0.01


def test_kk_full_stack_of_black_pixel_is_opaque():
    rng = RandomSource(5, np.arange(10_000))
    for k in (2, 3, 4, 5):
        bits = kk_bits(1, k, rng)
        assert bits.any(axis=1).all()


def test_single_share_bit_transmission_is_half():
    params = SchemeParams(k=3, n=7, n_prime=3)
    rng = RandomSource(77, np.arange(100_000))
    bits = grouped_bits(1, params, rng)
    assert np.all(np.abs((bits == 0).mean(axis=0) - 0.5) < 0.01)


# -- traditional variants ----------------------------------------------------

def test_yan_pre_permutation_layout(scripted):
    p = SchemeParams(k=3, n=5, variant="yan")
    b1, b2 = 1, 0
    bits = share_pixel_traditional(0, p, scripted(bits=[b1, b2]), permute=False)
    b3 = b1 ^ b2
    assert bits == [b1, b2, b3, b1, b2]


def test_wusun_pre_permutation_layout(scripted):
    p = SchemeParams(k=2, n=4, variant="wusun")
    bits = share_pixel_traditional(1, p, scripted(bits=[0]), permute=False)
    assert bits == [0, 1, 1, 1]


def test_chen_tsao_tail_is_fresh(scripted):
    p = SchemeParams(k=2, n=4, variant="chentsao")
    bits = share_pixel_traditional(0, p, scripted(bits=[1, 0, 1]), permute=False)
    assert bits == [1, 1, 0, 1]


def test_shyu_tail_draws_from_base_bits(scripted):
    # k=3, n=7: positions 4-6 repeat b1..b3, position 7 is one pick from K.
    p = SchemeParams(k=3, n=7, variant="shyu")
    for pick in range(3):
        bits = share_pixel_traditional(0, p, scripted(bits=[1, 0], picks=[pick]), permute=False)
        base = [1, 0, 1]
        assert bits == base + base + [base[pick]]


def test_shyu_tail_without_replacement():
    # k=4, n=7: three tail positions drawn from four base bits, all distinct.
    P = 20_000
    rng = RandomSource(3, np.arange(P))
    from rgvcs.sharing import _draw_without_replacement

    picks = _draw_without_replacement(4, 3, rng)
    assert all(len(set(row)) == 3 for row in picks.tolist())
    freq = Counter(tuple(sorted(r)) for r in picks.tolist())
    assert len(freq) == 4
    assert all(abs(c / P - 0.25) < 0.02 for c in freq.values())


def test_traditional_output_is_a_permutation():
    p = SchemeParams(k=3, n=5, variant="yan")
    P = 50_000
    rng = RandomSource(8, np.arange(P))
    out = traditional_bits(0, 3, 5, "yan", rng)
    again = traditional_bits(0, 3, 5, "yan", RandomSource(8, np.arange(P)), permute=True)
    assert (out == again).all()
    # every slot is a fair bit after the shuffle
    assert np.all(np.abs(out.mean(axis=0) - 0.5) < 0.01)
    # the multiset of bits is unchanged by the shuffle
    pre = traditional_bits(0, 3, 5, "yan", RandomSource(8, np.arange(P)), permute=False)
    assert (np.sort(pre, axis=1) == np.sort(out, axis=1)).all()
    assert p.n_prime == 5


def test_uniform_permutation_distribution():
    from rgvcs.sharing import _permute

    P = 60_000
    labels = np.tile(np.arange(3, dtype=np.uint8), (P, 1))
    perms = _permute(labels, RandomSource(4, np.arange(P)))
    freq = Counter(map(tuple, perms.tolist()))
    assert len(freq) == 6
    assert all(abs(c / P - 1 / 6) < 0.01 for c in freq.values())


def test_traditional_rejects_grouped():
    with pytest.raises(InvalidParameterError):
        share_pixel_traditional(0, SchemeParams(k=2, n=3), RandomSource(0))
    with pytest.raises(InvalidParameterError):
        Variant.parse("bogus")


# -- grouped paradigm --------------------------------------------------------

def test_group_layout():
    layout = SchemeParams(k=3, n=12, n_prime=5).layout
    assert layout == BitGroupLayout(3, (5, 5, 2))
    assert [list(layout.members(g)) for g in range(3)] == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9], [10, 11]]
    assert layout.is_complete(1) and not layout.is_complete(2)


def test_params_invariants():
    with pytest.raises(InvalidParameterError):
        SchemeParams(k=4, n=6, n_prime=3)
    with pytest.raises(InvalidParameterError):
        SchemeParams(k=3, n=5, n_prime=6)
    assert SchemeParams(k=3, n=5, n_prime=3, variant="shyu").n_prime == 5
    assert SchemeParams(k=3, n=5).n_prime == 3


def test_grouped_worked_example(scripted):
    # k=2, n'=3, n=8 with the draws of the worked example:
    # G_1 = (b2, b1, b3), G_2 = (b1, b3, b2), G_3 = (b2, b1).
    params = SchemeParams(k=2, n=8, n_prime=3)
    shuffle = [2, 0]            # Fisher-Yates j for i=2, i=1: order (b2, b1, b3)
    second = [1, 1, 0]          # pool picks -> first-group positions 1, 2, 0
    third = [0, 1]              # pool picks -> first-group positions 0, 1
    # s = 1, b1 = 0: Yan (1,2,3) gives b2 = 1 and b3 = b1 = 0
    rng = scripted(bits=[0], picks=shuffle + second + third)
    out, pos = _grouped_with_positions(1, params, rng)
    assert pos[0].tolist() == [0, 1, 2, 1, 2, 0, 0, 1]
    b1, b2, b3 = 0, 1, 0
    assert out[0].tolist() == [b2, b1, b3, b1, b3, b2, b2, b1]


def test_grouped_degenerates_when_single_group():
    p = SchemeParams(k=3, n=5, n_prime=5)
    for seed in range(20):
        grouped = share_pixel_grouped(1, p, RandomSource(seed, 4))
        yan = share_pixel_traditional(1, SchemeParams(k=3, n=5, variant="yan"), RandomSource(seed, 4))
        assert grouped == yan


def test_grouped_with_nprime_k_uses_base_scheme_directly(scripted):
    p = SchemeParams(k=3, n=3, n_prime=3)
    assert share_pixel_grouped(1, p, scripted(bits=[0, 1])) == [0, 1, 0]


@pytest.mark.parametrize("k,n_prime,n", [(3, 3, 7), (2, 3, 8), (3, 5, 12), (4, 4, 10)])
def test_grouped_structure(k, n_prime, n):
    params = SchemeParams(k=k, n=n, n_prime=n_prime)
    rng = RandomSource(31, np.arange(10_000))
    out, pos = _grouped_with_positions(0, params, rng)
    layout = params.layout
    for g in range(1, layout.group_count):
        cols = list(layout.members(g))
        block = np.sort(pos[:, cols], axis=1)
        if layout.is_complete(g):
            assert (block == np.arange(n_prime)).all()
        else:
            assert (np.diff(block, axis=1) > 0).all()
    first = out[:, :n_prime]
    assert (np.take_along_axis(first, pos, axis=1) == out).all()


def test_incomplete_group_is_uniform_subset():
    params = SchemeParams(k=3, n=7, n_prime=3)
    P = 60_000
    _, pos = _grouped_with_positions(0, params, RandomSource(2, np.arange(P)))
    freq = Counter(pos[:, 6].tolist())
    assert all(abs(freq[p] / P - 1 / 3) < 0.01 for p in range(3))


def test_grouped_security_any_fewer_than_k_positions():
    params = SchemeParams(k=3, n=7, n_prime=3)
    P = 100_000
    zero = grouped_bits(0, params, RandomSource(1, np.arange(P)))
    one = grouped_bits(1, params, RandomSource(2, np.arange(P)))
    for pair in [(0, 1), (0, 3), (3, 6), (4, 5)]:
        t0 = np.mean((zero[:, pair[0]] | zero[:, pair[1]]) == 0)
        t1 = np.mean((one[:, pair[0]] | one[:, pair[1]]) == 0)
        assert abs(t0 - t1) < 0.01


def test_stack_bits():
    assert stack_bits([0, 0, 0]) == 0
    assert stack_bits([0, 1, 0]) == 1
    with pytest.raises(InvalidParameterError):
        stack_bits([])


def test_scalar_wrappers_reject_multi_stream_sources():
    with pytest.raises(InvalidParameterError):
        share_pixel_kk(0, 2, RandomSource(0, np.arange(3)))
    with pytest.raises(InvalidParameterError):
        share_pixel_kk(2, 2, RandomSource(0))
