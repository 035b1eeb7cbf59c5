"""Keys under the unbiased Bernoulli model.

Random bits come from a counter-based generator, "splitmix64-counter/v1":

    base(seed, stream, trial) = mix(mix(mix(seed ^ 0x6A09E667F3BCC908)
                                         + stream * GOLDEN) + trial * GOLDEN)
    word(seed, stream, trial, key, w) = mix(base + (key * 2**20 + w) * GOLDEN)

where GOLDEN = 0x9E3779B97F4A7C15, arithmetic is modulo 2**64 and ``mix`` is
the SplitMix64 output finaliser (Steele, Lea and Flood 2014)::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

Bit i of a key is bit ``63 - i % 64`` (most significant first) of word
``i // 64``. Every bit is therefore a pure function of
(seed, stream, trial, key index, bit index), independent of the order in
which keys are created or queried.  Key indices must stay below 2**44 and
words per key below 2**20.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IndistinguishableKeysError, InsufficientBitsError

GENERATOR_NAME = "splitmix64-counter/v1"

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_SEED_SALT = 0x6A09E667F3BCC908
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_WORD_SHIFT = 20

# substream identifiers
KEY_STREAM = 1
PAIR_STREAM = 2


def mix64(z: int) -> int:
    """SplitMix64 finaliser on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_base(seed: int, stream: int, trial: int) -> int:
    h = mix64((seed & MASK64) ^ _SEED_SALT)
    h = mix64(h + stream * GOLDEN)
    return mix64(h + trial * GOLDEN)


def word(seed: int, stream: int, trial: int, key: int, w: int) -> int:
    """64 random bits: word ``w`` of key ``key`` in the given substream."""
    base = stream_base(seed, stream, trial)
    return mix64(base + ((key << _WORD_SHIFT) + w) * GOLDEN)


def words_array(seed: int, stream: int, trials, keys, w: int = 0) -> np.ndarray:
    """Vectorised :func:`word` over a grid of trials x keys.

    ``trials`` and ``keys`` are 1-d integer sequences; the result has shape
    ``(len(trials), len(keys))``.
    """
    bases = np.array([stream_base(seed, stream, int(t)) for t in trials], dtype=np.uint64)
    counters = (np.asarray(keys, dtype=np.uint64) << np.uint64(_WORD_SHIFT)) + np.uint64(w)
    with np.errstate(over="ignore"):
        z = bases[:, None] + counters[None, :] * np.uint64(GOLDEN)
    return mix64_array(z)


def uniform_index(r: np.ndarray | int, m: int):
    """Map 64 random bits to {0, ..., m-1} using the top 53 bits."""
    u = (np.asarray(r, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return np.floor(u * m).astype(np.int64)


def clz64(x: np.ndarray) -> np.ndarray:
    """Count leading zeros of uint64 values (64 for zero)."""
    x = np.asarray(x, dtype=np.uint64)
    hi = (x >> np.uint64(32)).astype(np.float64)
    lo = (x & np.uint64(0xFFFFFFFF)).astype(np.float64)
    _, ehi = np.frexp(hi)
    _, elo = np.frexp(lo)
    return np.where(hi > 0, 32 - ehi, 64 - elo).astype(np.int64)


@dataclass(frozen=True)
class SeedSpec:
    seed: int
    generator_name: str = GENERATOR_NAME

    def as_dict(self) -> dict:
        return {"seed": self.seed, "generator": self.generator_name}


@dataclass(eq=False)
class Key:
    """A binary key, i.e. the dyadic expansion of a number in [0, 1).

    Random keys extend themselves on demand; fixed keys never do.
    """

    materialized_bits: list[int] = field(default_factory=list)
    seed: int | None = None
    key_index: int = 0
    trial: int = 0
    stream: int = KEY_STREAM

    @classmethod
    def fixed(cls, bits) -> "Key":
        if isinstance(bits, str):
            bits = bits.removeprefix("0.").rstrip(".…").replace(" ", "")
            bits = [int(c) for c in bits]
        bits = [int(b) for b in bits]
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        return cls(materialized_bits=bits)

    @classmethod
    def random(cls, seed: int, key_index: int, trial: int = 0) -> "Key":
        return cls(seed=seed, key_index=key_index, trial=trial)

    @property
    def is_fixed(self) -> bool:
        return self.seed is None

    def __len__(self) -> int:
        return len(self.materialized_bits)

    def _extend_to(self, i: int) -> None:
        bits = self.materialized_bits
        while len(bits) <= i:
            w = word(self.seed, self.stream, self.trial, self.key_index, len(bits) // 64)
            start = len(bits) % 64
            bits.extend((w >> (63 - b)) & 1 for b in range(start, 64))

    def bit(self, i: int) -> int:
        if i < 0:
            raise IndexError("bit index must be non-negative")
        if i >= len(self.materialized_bits):
            if self.is_fixed:
                raise InsufficientBitsError(
                    f"insufficient fixed bits: bit {i} requested, {len(self)} available")
            self._extend_to(i)
        return self.materialized_bits[i]


def key_bit(key: Key, i: int) -> int:
    return key.bit(i)


def lcp(a: Key, b: Key) -> int:
    """Length of the longest common prefix of two keys."""
    i = 0
    while True:
        if a.is_fixed and b.is_fixed and i >= min(len(a), len(b)):
            raise IndistinguishableKeysError(
                f"undistinguishable fixed keys: equal on all {i} materialized bits")
        try:
            if a.bit(i) != b.bit(i):
                return i
        except InsufficientBitsError as exc:
            raise IndistinguishableKeysError(
                f"undistinguishable fixed keys: equal on all {i} materialized bits") from exc
        i += 1


def random_keys(n: int, seed: int, trial: int = 0) -> list[Key]:
    return [Key.random(seed, k, trial) for k in range(n)]
