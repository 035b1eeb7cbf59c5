"""Exact laws and moments of the depth and the pairwise distance.

Conditioning on the size L of the left subtree (Binomial(n, 1/2)) gives

    depth:     n E f(d_n)      = 2 sum_l b(n,l) l E f(d_l + 1)
    distance:  C(n,2) E f(D_n) = 2 sum_l b(n,l) C(l,2) E f(D_l)
                                 + sum_l b(n,l) l (n-l) E f(d_l + d'_{n-l} + 2)

The events L in {0, n} (probability 2**(1-n)) reproduce the same problem.
For distances the self term is moved to the left-hand side; for the depth
PMF it reads the previous depth level, which is already known.

Binomial weights below 1e-40 are never touched: every sum over l runs over
the window |l - n/2| <= 7 sqrt(n) + 8, whose complement has probability at
most 2 exp(-98) by Hoeffding's inequality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import binom, poisson

from .errors import DomainError

MGF_T_MAX = 0.1
PMF_MAX_N = 2048
TAIL_TARGET = 1e-12
POISSON_TAIL = 1e-15


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probabilities ``masses[k]`` of the values ``support_offset + k``."""

    support_offset: int
    masses: np.ndarray
    tail_bound: float = 0.0

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return (self.support_offset == other.support_offset and self.tail_bound == other.tail_bound
                and np.array_equal(self.masses, other.masses))

    @property
    def support(self) -> np.ndarray:
        return self.support_offset + np.arange(len(self.masses))

    def __call__(self, k: int) -> float:
        i = k - self.support_offset
        return float(self.masses[i]) if 0 <= i < len(self.masses) else 0.0

    def mean(self) -> float:
        return float(np.dot(self.support, self.masses))

    def second_moment(self) -> float:
        x = self.support.astype(float)
        return float(np.dot(x * x, self.masses))

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2

    def total(self) -> float:
        return float(self.masses.sum())

    def shifted(self, by: int) -> "Pmf":
        return Pmf(self.support_offset + by, self.masses, self.tail_bound)

    def trimmed(self, floor: float = 0.0) -> "Pmf":
        nz = np.nonzero(self.masses > floor)[0]
        if len(nz) == 0:
            return self
        lo, hi = nz[0], nz[-1] + 1
        return Pmf(self.support_offset + int(lo), self.masses[lo:hi].copy(), self.tail_bound)

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(m) for k, m in zip(self.support, self.masses)}


def total_variation(p: Pmf, q: Pmf) -> float:
    lo = min(p.support_offset, q.support_offset)
    hi = max(p.support_offset + len(p.masses), q.support_offset + len(q.masses))
    a = np.zeros(hi - lo)
    b = np.zeros(hi - lo)
    a[p.support_offset - lo:p.support_offset - lo + len(p.masses)] = p.masses
    b[q.support_offset - lo:q.support_offset - lo + len(q.masses)] = q.masses
    return 0.5 * float(np.abs(a - b).sum())


@dataclass(frozen=True)
class SplitWeights:
    """b(n, l) = C(n, l) 2**-n for l = 0..n."""

    n: int
    weights: np.ndarray


def split_weights(n: int) -> SplitWeights:
    """Correctly rounded binomial(n, 1/2) probabilities (exact integer binomials)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    denom = 1 << n
    half = []
    c = 1
    for l in range(n // 2 + 1):
        half.append(c / denom)
        c = c * (n - l) // (l + 1)
    w = np.array(half + half[: (n + 1) // 2][::-1])
    w.flags.writeable = False
    return SplitWeights(n, w)


@lru_cache(maxsize=None)
def _window(n: int) -> tuple[int, np.ndarray]:
    """(lo, b(n, lo..n-lo)) restricted to 1 <= l <= n-1."""
    half_width = int(math.ceil(7.0 * math.sqrt(n))) + 8
    lo = max(1, n // 2 - half_width)
    hi = n - lo
    w = binom.pmf(np.arange(lo, hi + 1), n, 0.5)
    # exact mirror symmetry
    w = 0.5 * (w + w[::-1])
    w.flags.writeable = False
    return lo, w


def _c2(n):
    n = np.asarray(n, dtype=float)
    return n * (n - 1) / 2.0


# --------------------------------------------------------------------------
# moments


def _variance(second: float, mean: float) -> float:
    v = float(second - mean * mean)
    # cancellation can leave a few ulps below zero for degenerate laws
    return 0.0 if -1e-12 * max(1.0, second) < v < 0.0 else v


@dataclass(frozen=True)
class MomentTable:
    depth_mean: np.ndarray
    depth_second: np.ndarray
    distance_mean: np.ndarray
    distance_second: np.ndarray

    @property
    def cap(self) -> int:
        return len(self.distance_mean) - 1

    def depth_variance(self, n: int) -> float:
        return _variance(self.depth_second[n], self.depth_mean[n])

    def distance_variance(self, n: int) -> float:
        return _variance(self.distance_second[n], self.distance_mean[n])

    def truncated(self, N: int) -> "MomentTable":
        return MomentTable(*(a[: N + 1] for a in (
            self.depth_mean, self.depth_second, self.distance_mean, self.distance_second)))


_moment_cache: list[MomentTable] = []


def _compute_moments(N: int) -> MomentTable:
    e = np.zeros(N + 1)
    s = np.zeros(N + 1)
    d = np.zeros(N + 1)
    q = np.zeros(N + 1)
    C2 = _c2(np.arange(N + 1))
    for n in range(2, N + 1):
        lo, w = _window(n)
        L = np.arange(lo, n - lo + 1)
        m = n - L
        self_p = 2.0 ** (1 - n)
        wl = w * L
        # the self term of the depth recursion contributes 2**(1-n) n (e_n + 1)
        e[n] = (n * (1.0 - self_p) + 2.0 * np.dot(wl, e[L]) + self_p * n) / (n * (1.0 - self_p))
        s[n] = (2.0 * np.dot(wl, s[L] + 2.0 * e[L] + 1.0) + self_p * n * (2.0 * e[n] + 1.0)) \
            / (n * (1.0 - self_p))
        wc = w * L * m
        d[n] = (2.0 * np.dot(w * C2[L], d[L]) + np.dot(wc, e[L] + e[m] + 2.0)) \
            / (C2[n] * (1.0 - self_p))
        cross2 = s[L] + s[m] + 4.0 + 2.0 * e[L] * e[m] + 4.0 * e[L] + 4.0 * e[m]
        q[n] = (2.0 * np.dot(w * C2[L], q[L]) + np.dot(wc, cross2)) / (C2[n] * (1.0 - self_p))
    for a in (e, s, d, q):
        a.flags.writeable = False
    return MomentTable(e, s, d, q)


def moment_table(N: int) -> MomentTable:
    """First and second moments of depth and distance for all n <= N."""
    if N < 2:
        raise DomainError("moment table needs N >= 2")
    if _moment_cache and _moment_cache[0].cap >= N:
        return _moment_cache[0].truncated(N)
    table = _compute_moments(N)
    _moment_cache[:] = [table]
    return table


# --------------------------------------------------------------------------
# moment generating / characteristic functions


def transform_tables(N: int, t) -> tuple[np.ndarray, np.ndarray]:
    """E exp(t d_n) and E exp(t D_n) for n = 0..N and each entry of ``t``.

    ``t`` may be real or complex (t = iu gives characteristic functions).
    Returns two arrays of shape (N + 1, len(t)); rows 0 and 1 of the
    distance table are undefined and left at zero.
    """
    t = np.atleast_1d(np.asarray(t))
    dtype = complex if np.iscomplexobj(t) else float
    et = np.exp(t)
    e2t = et * et
    psi = np.zeros((N + 1, len(t)), dtype=dtype)
    phi = np.zeros((N + 1, len(t)), dtype=dtype)
    psi[1] = 1.0
    C2 = _c2(np.arange(N + 1))
    for n in range(2, N + 1):
        lo, w = _window(n)
        L = np.arange(lo, n - lo + 1)
        m = n - L
        self_p = 2.0 ** (1 - n)
        psi[n] = 2.0 * et * ((w * L) @ psi[L]) / (n * (1.0 - et * self_p))
        phi[n] = (2.0 * ((w * C2[L]) @ phi[L]) + e2t * ((w * L * m) @ (psi[L] * psi[m]))) \
            / (C2[n] * (1.0 - self_p))
    return psi, phi


@lru_cache(maxsize=16)
def _mgf_column(N: int, t: float) -> np.ndarray:
    _, phi = transform_tables(N, [t])
    col = phi[:, 0].copy()
    col.flags.writeable = False
    return col


def _check_t(t: float) -> None:
    if not (abs(t) <= MGF_T_MAX):
        raise DomainError(f"t = {t} outside the validated domain |t| <= {MGF_T_MAX}")


def mgf_sequence(N: int, t: float) -> np.ndarray:
    """E exp(t D_n) for n = 0..N (entries 0 and 1 are meaningless)."""
    _check_t(t)
    if N < 2:
        raise DomainError("distance needs n >= 2 (n < 2 given)")
    return _mgf_column(N, float(t))


def exact_mgf(n: int, t: float) -> float:
    """E exp(t D_n) for |t| <= 0.1."""
    _check_t(t)
    if n < 2:
        raise DomainError("distance needs n >= 2 (n < 2 given)")
    if t == 0:
        return 1.0
    return float(_mgf_column(n, float(t))[n])


def exact_cf(n: int, u):
    """E exp(i u D_n); ``u`` may be a scalar or an array."""
    if n < 2:
        raise DomainError("distance needs n >= 2 (n < 2 given)")
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    _, phi = transform_tables(n, 1j * uu)
    out = phi[n]
    return out if np.ndim(u) else complex(out[0])


# --------------------------------------------------------------------------
# probability mass functions


def depth_levels(N: int) -> int:
    return int(math.ceil(2 * math.log2(max(N, 2)))) + 64


@dataclass(frozen=True)
class _PmfTables:
    depth: np.ndarray      # (N+1, K+1)
    distance: np.ndarray   # (N+1, 2K+3)
    levels: int

    @property
    def cap(self) -> int:
        return self.depth.shape[0] - 1


def _compute_pmf_tables(N: int, K: int) -> _PmfTables:
    D = np.zeros((N + 1, K + 1))
    D[1, 0] = 1.0
    for n in range(2, N + 1):
        lo, w = _window(n)
        L = np.arange(lo, n - lo + 1)
        rest = (2.0 / n) * ((w * L) @ D[L, :-1])
        self_p = 2.0 ** (1 - n)
        row = D[n]
        for k in range(1, K + 1):
            row[k] = rest[k - 1] + self_p * row[k - 1]
    width = 2 * K + 3
    P = np.zeros((N + 1, width))
    jj, mm = np.meshgrid(np.arange(K + 1), np.arange(K + 1), indexing="ij")
    conv_index = (jj + mm + 2).ravel()
    C2 = _c2(np.arange(N + 1))
    for n in range(2, N + 1):
        lo, w = _window(n)
        L = np.arange(lo, n - lo + 1)
        m = n - L
        cross = ((w * L * m)[:, None] * D[L]).T @ D[m]
        acc = np.bincount(conv_index, weights=cross.ravel(), minlength=width)[:width]
        acc += 2.0 * ((w * C2[L]) @ P[L])
        P[n] = acc / (C2[n] * (1.0 - 2.0 ** (1 - n)))
    return _PmfTables(D, P, K)


_pmf_cache: list[_PmfTables] = []


def _pmf_tables(N: int) -> _PmfTables:
    if N > PMF_MAX_N:
        raise DomainError(f"exact PMFs are limited to n <= {PMF_MAX_N}")
    if _pmf_cache and _pmf_cache[0].cap >= N:
        return _pmf_cache[0]
    N = max(N, 64)
    K = depth_levels(N)
    while True:
        tables = _compute_pmf_tables(N, K)
        residual = 1.0 - tables.depth[1:].sum(axis=1).min()
        if residual < TAIL_TARGET:
            break
        K *= 2
    _pmf_cache[:] = [tables]
    return tables


def depth_pmf(n: int) -> Pmf:
    """Law of the depth of a uniformly chosen key among n."""
    if n < 1:
        raise DomainError("depth needs n >= 1 (no key to select)")
    tables = _pmf_tables(n)
    K = tables.levels
    tail = min(1.0, (n - 1) * 2.0 ** -K)
    return Pmf(0, tables.depth[n].copy(), tail).trimmed()


def distance_pmf(n: int) -> Pmf:
    """Law of the distance between a uniform random pair among n keys."""
    if n < 2:
        raise DomainError("distance needs n >= 2 (n < 2 given)")
    tables = _pmf_tables(n)
    K = tables.levels
    tail = min(1.0, 2 * (n - 1) * 2.0 ** -K)
    return Pmf(0, tables.distance[n].copy(), tail).trimmed()


# --------------------------------------------------------------------------
# poissonization


def poisson_cap(z: float, tail: float = POISSON_TAIL) -> int:
    """Smallest m with P(Poisson(z) > m) < tail."""
    m = int(poisson.isf(tail, z))
    while poisson.sf(m, z) >= tail:
        m += 1
    return m


def poisson_mixture(z: float, values) -> float:
    """sum_n values[n] P(N(z) = n) for a per-n sequence ``values``."""
    if z <= 0:
        raise DomainError("z must be positive")
    m = poisson_cap(z)
    if len(values) <= m:
        raise DomainError(
            f"values cover n <= {len(values) - 1}; Poisson({z}) mixture needs n up to {m}")
    n = np.arange(m + 1)
    w = poisson.pmf(n, z)
    # remove accumulated rounding so the weights carry exactly P(N <= m)
    w *= poisson.cdf(m, z) / math.fsum(w)
    return float(np.dot(w, np.asarray(values[: m + 1], dtype=float)))
