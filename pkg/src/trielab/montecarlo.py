"""Seeded simulation of random tries.

Two engines produce identical samples from the same seed:

* ``"trie"`` builds every trie node by node from lazily extended keys;
* ``"fast"`` works on the first 64-bit word of each key.  Within a trial the
  words are distinct (the generator is a bijection of distinct counters), so
  every lcp is below 64 and a key's depth is 1 + clz(min_k w_i ^ w_k).

The sampled pair of a trial comes from its own substream: with two words
r1, r2, i = floor(u1 n), j' = floor(u2 (n - 1)) and j = j' + (j' >= i).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitkeys import KEY_STREAM, PAIR_STREAM, SeedSpec, clz64, random_keys, uniform_index, word, words_array
from .errors import DomainError
from .exact import Pmf
from .trie import build_trie, distance, wiener_index

ENGINES = ("fast", "trie")
BATCH_WORDS = 1 << 22


@dataclass(frozen=True)
class SimReport:
    n: int
    trials: int
    seed: SeedSpec
    empirical_pmf: Pmf
    mean: float
    variance: float
    std_error_of_mean: float
    samples: np.ndarray = field(repr=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            **self.seed.as_dict(),
            "mean": self.mean,
            "variance": self.variance,
            "std_error": self.std_error_of_mean,
        }


def _report(n: int, seed: int, samples: np.ndarray) -> SimReport:
    samples = np.asarray(samples, dtype=np.int64)
    trials = len(samples)
    lo = int(samples.min())
    counts = np.bincount(samples - lo)
    pmf = Pmf(lo, counts / trials, 0.0)
    x = samples.astype(float)
    mean = math.fsum(x) / trials
    var = math.fsum((x - mean) ** 2) / (trials - 1) if trials > 1 else 0.0
    return SimReport(n, trials, SeedSpec(seed), pmf, mean, var, math.sqrt(var / trials), samples)


def _check(n: int, trials: int, low: int = 2) -> None:
    if n < low:
        raise DomainError(f"n must be at least {low}")
    if trials < 1:
        raise DomainError("trials must be at least 1")


def _batches(n: int, trials: int):
    step = max(1, BATCH_WORDS // n)
    for start in range(0, trials, step):
        yield np.arange(start, min(trials, start + step))


def sample_pair(seed: int, trial: int, n: int) -> tuple[int, int]:
    i = int(uniform_index(word(seed, PAIR_STREAM, trial, 0, 0), n))
    j = int(uniform_index(word(seed, PAIR_STREAM, trial, 1, 0), n - 1))
    return i, j + (j >= i)


def _pairs(seed: int, trials: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    r = words_array(seed, PAIR_STREAM, trials, [0, 1])
    i = uniform_index(r[:, 0], n)
    j = uniform_index(r[:, 1], n - 1)
    return i, j + (j >= i)


def _depth_from_words(W: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """1 + max_k lcp(idx, k) for each row of the (trials, n) word array."""
    rows = np.arange(W.shape[0])
    X = W ^ W[rows, idx][:, None]
    X[rows, idx] = np.uint64(0xFFFFFFFFFFFFFFFF)
    return 1 + clz64(X.min(axis=1))


def _distance_fast(n: int, trials: int, seed: int) -> np.ndarray:
    out = []
    for t in _batches(n, trials):
        W = words_array(seed, KEY_STREAM, t, np.arange(n))
        i, j = _pairs(seed, t, n)
        rows = np.arange(len(t))
        lcp = clz64(W[rows, i] ^ W[rows, j])
        out.append(_depth_from_words(W, i) + _depth_from_words(W, j) - 2 * lcp)
    return np.concatenate(out)


def _distance_trie(n: int, trials: int, seed: int) -> np.ndarray:
    out = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        trie = build_trie(random_keys(n, seed, t))
        out[t] = distance(trie, *sample_pair(seed, t, n))
    return out


def simulate_distance(n: int, trials: int, seed: int, engine: str = "fast") -> SimReport:
    """Distance between a uniform random pair of leaves, one pair per trie."""
    _check(n, trials)
    if engine == "fast":
        samples = _distance_fast(n, trials, seed)
    elif engine == "trie":
        samples = _distance_trie(n, trials, seed)
    else:
        raise DomainError(f"engine must be one of {ENGINES}")
    return _report(n, seed, samples)


def simulate_depth(n: int, trials: int, seed: int, engine: str = "fast") -> SimReport:
    """Depth of a uniformly chosen key (the first pair index of each trial)."""
    _check(n, trials, low=1)
    if n == 1:
        return _report(n, seed, np.zeros(trials, dtype=np.int64))
    if engine == "fast":
        out = []
        for t in _batches(n, trials):
            W = words_array(seed, KEY_STREAM, t, np.arange(n))
            i, _ = _pairs(seed, t, n)
            out.append(_depth_from_words(W, i))
        samples = np.concatenate(out)
    elif engine == "trie":
        samples = np.array([build_trie(random_keys(n, seed, t)).depth(sample_pair(seed, t, n)[0])
                            for t in range(trials)], dtype=np.int64)
    else:
        raise DomainError(f"engine must be one of {ENGINES}")
    return _report(n, seed, samples)


def _pair_lcp_sum(S: np.ndarray) -> np.ndarray:
    """sum_{i<j} lcp over each row of sorted distinct words.

    sum_{i<j} lcp = sum_{k>=1} #{pairs sharing a k-bit prefix}; on a sorted
    row these pairs form runs of adjacent entries whose adjacent lcp >= k.
    """
    A = clz64(S[:, 1:] ^ S[:, :-1])
    total = np.zeros(S.shape[0], dtype=np.int64)
    for k in range(1, int(A.max()) + 1):
        b = (A >= k).astype(np.int64)
        c = np.cumsum(b, axis=1)
        reset = np.maximum.accumulate(np.where(b == 0, c, 0), axis=1)
        total += (c - reset).sum(axis=1)
    return total


def _wiener_fast(n: int, trials: int, seed: int) -> np.ndarray:
    out = []
    for t in _batches(n, trials):
        S = np.sort(words_array(seed, KEY_STREAM, t, np.arange(n)), axis=1)
        A = clz64(S[:, 1:] ^ S[:, :-1])
        edge = np.full((len(t), 1), -1)
        depth = 1 + np.maximum(np.hstack([edge, A]), np.hstack([A, edge]))
        out.append((n - 1) * depth.sum(axis=1) - 2 * _pair_lcp_sum(S))
    return np.concatenate(out)


def simulate_wiener(n: int, trials: int, seed: int, engine: str = "fast") -> SimReport:
    """Wiener index (sum of all pairwise leaf distances) per trie."""
    _check(n, trials)
    if engine == "fast":
        samples = _wiener_fast(n, trials, seed)
    elif engine == "trie":
        samples = np.array([wiener_index(build_trie(random_keys(n, seed, t)))
                            for t in range(trials)], dtype=np.int64)
    else:
        raise DomainError(f"engine must be one of {ENGINES}")
    return _report(n, seed, samples)


def concentration_fraction(report: SimReport, eps: float = 0.5) -> float:
    ratio = report.samples / math.log2(report.n)
    return float(np.mean(np.abs(ratio - 2.0) < eps))


def concentration_check(n: int, trials: int, seed: int, eps: float = 0.5) -> float:
    """Fraction of trials with |D / lg n - 2| < eps."""
    if n < 16:
        raise DomainError("concentration check needs n >= 16")
    return concentration_fraction(simulate_distance(n, trials, seed), eps)
