from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trielab.bitkeys import Key, lcp, random_keys
from trielab.errors import DepthCapExceeded, DomainError, IndistinguishableKeysError
from trielab.trie import (build_trie, complete_trie_stats, distance, lca_depth,
                          pairwise_distances_bruteforce, wiener_index)

FIVE_KEYS = ["0.00111", "0.11011", "0.00011", "0.01010", "0.11111"]


@pytest.fixture
def five_keys():
    return build_trie([Key.fixed(b) for b in FIVE_KEYS])


def test_five_keys_depths_and_distances(five_keys):
    assert five_keys.depths() == [3, 3, 3, 2, 3]
    assert distance(five_keys, 1, 3) == 5
    assert distance(five_keys, 0, 2) == 2
    assert distance(five_keys, 2, 2) == 0
    assert wiener_index(five_keys) == 44


def test_five_keys_wiener_matches_bruteforce(five_keys):
    keys = [Key.fixed(b) for b in FIVE_KEYS]
    assert sum(pairwise_distances_bruteforce(keys).values()) == 44


def test_invalid_index(five_keys):
    with pytest.raises(IndexError):
        distance(five_keys, 0, 5)


def test_small_tries():
    empty = build_trie([])
    assert empty.root is None and empty.key_count == 0 and wiener_index(empty) == 0
    one = build_trie([Key.random(1, 0)])
    assert one.depths() == [0] and list(one.internal_nodes()) == []
    assert wiener_index(one) == 0
    two = build_trie([Key.fixed("0.0"), Key.fixed("0.1")])
    assert two.depths() == [1, 1] and wiener_index(two) == 2


def test_identical_fixed_keys_fail():
    with pytest.raises(IndistinguishableKeysError, match="undistinguishable fixed keys"):
        build_trie([Key.fixed("0.0110"), Key.fixed("0.0110")])


def test_depth_cap():
    a = Key.fixed([0] * 50 + [0])
    b = Key.fixed([0] * 50 + [1])
    assert build_trie([a, b]).depths() == [51, 51]
    with pytest.raises(DepthCapExceeded):
        build_trie([a, b], depth_cap=20)


def test_complete_trie_stats():
    assert complete_trie_stats(1) == (2, 0)
    assert complete_trie_stats(2)[0] == Fraction(10, 3)
    for h in range(1, 9):
        mean, var = complete_trie_stats(h)
        assert 2 <= mean <= 2 * h and 0 <= var <= h * h
    with pytest.raises(DomainError):
        complete_trie_stats(0)


def test_complete_trie_stats_against_built_trie():
    h = 4
    keys = [Key.fixed([(v >> (h - 1 - b)) & 1 for b in range(h)]) for v in range(2 ** h)]
    trie = build_trie(keys)
    d = [distance(trie, i, j) for i, j in combinations(range(2 ** h), 2)]
    mean = Fraction(sum(d), len(d))
    var = Fraction(sum(x * x for x in d), len(d)) - mean ** 2
    assert complete_trie_stats(h) == (mean, var)


trial_params = st.tuples(st.integers(2, 40), st.integers(0, 2**32), st.integers(0, 50))


@settings(max_examples=60, deadline=None)
@given(trial_params)
def test_trie_invariants(params):
    n, seed, trial = params
    keys = random_keys(n, seed, trial)
    trie = build_trie(keys)
    brute = pairwise_distances_bruteforce(keys)
    for i in range(n):
        d = trie.depth(i)
        assert d == 1 + max(lcp(keys[i], keys[j]) for j in range(n) if j != i)
        # path spells a prefix of the key
        node, path = trie.leaves[i], []
        while node.parent is not None:
            path.append(0 if node.parent.left is node else 1)
            node = node.parent
        assert path[::-1] == [keys[i].bit(b) for b in range(d)]
    for (i, j), dij in brute.items():
        assert distance(trie, i, j) == dij
        assert lca_depth(trie, i, j) == lcp(keys[i], keys[j])
    assert min(brute.values()) == 2
    assert wiener_index(trie) == sum(brute.values())
    # every internal node holds at least two keys below it
    for node in trie.internal_nodes():
        below, stack = 0, [node]
        while stack:
            x = stack.pop()
            if x.is_leaf:
                below += 1
            else:
                stack.extend(c for c in (x.left, x.right) if c is not None)
        assert below >= 2


def _bits(key, count):
    return [key.bit(b) for b in range(count)]


@settings(max_examples=40, deadline=None)
@given(trial_params)
def test_bit_flip_and_prefix_shift(params):
    n, seed, trial = params
    keys = random_keys(n, seed, trial)
    base = build_trie(keys)
    width = max(base.depths()) + 1
    raw = [_bits(k, width) for k in keys]
    flipped = build_trie([Key.fixed([1 - b for b in r]) for r in raw])
    assert sorted(flipped.depths()) == sorted(base.depths())
    assert wiener_index(flipped) == wiener_index(base)
    shifted = build_trie([Key.fixed([1] + r) for r in raw])
    assert shifted.depths() == [d + 1 for d in base.depths()]
    for i, j in combinations(range(n), 2):
        assert distance(shifted, i, j) == distance(base, i, j)
