"""Mellin transforms of the poissonized distance moments and CF inversion.

With N(z) ~ Poisson(z),

    P(t, z) = E[C(N, 2) e^{t D_N}] - (z^2 / 2) e^{2t}
    B(z)    = E[C(N, 2) D_N] - z^2            (dP/dt at t = 0)
    L(z)    = E[C(N, 2) D_N^2] - 2 z^2        (d2P/dt2 at t = 0)

B* and L* live in the strip <-3, -2>, P*(t, .) in <-3, -2 - 2|t|/ln 2>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.stats import poisson

from . import asymptotics as asy
from .errors import DomainError, QuadratureError
from .exact import Pmf, exact_cf, moment_table, poisson_cap
from .special import EULER_GAMMA, LN2, PI, gamma

EDGE_GUARD = 1e-6
DEFAULT_STRIP = (-3.0, -2.0)


@dataclass(frozen=True)
class MellinPoint:
    """A point s with the strip <a, b> the caller claims it lies in."""

    s: complex
    strip: tuple[float, float] = DEFAULT_STRIP

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        a, b = self.strip
        x = self.s.real
        if not (a + EDGE_GUARD <= x <= b - EDGE_GUARD):
            raise DomainError(
                f"Re s = {x} not inside <{a}, {b}> with edge guard {EDGE_GUARD}")


def _point(s, strip=DEFAULT_STRIP) -> MellinPoint:
    if isinstance(s, MellinPoint):
        a, b = strip
        if not (a + EDGE_GUARD <= s.s.real <= b - EDGE_GUARD):
            raise DomainError(f"Re s = {s.s.real} not inside <{a}, {b}>")
        return s
    return MellinPoint(s, strip)


def _out(v: complex):
    return complex(v)


def B_star(s) -> complex:
    """-2^{s+1} Gamma(s+2) / ((1 - 2^{s+1})(1 - 2^{s+2}))."""
    s = _point(s).s
    p = 2.0 ** s
    return _out(-2.0 * p * gamma(s + 2.0) / ((1.0 - 2.0 * p) * (1.0 - 4.0 * p)))


def L_star(s, inner_cap: int | None = None) -> complex:
    """Mellin transform of the second poissonized moment (minus 2 z^2)."""
    s = _point(s).s
    p = 2.0 ** s
    cfg = asy.SeriesConfig(inner_cap=inner_cap)
    S = asy.inner_sum(-(s + 2.0), 0.0, cfg)
    bracket = -16.0 * p / (1.0 - 4.0 * p) + (1.0 - 28.0 * p) / (4.0 * p) - 2.0 * S
    return _out(2.0 * p * gamma(s + 2.0) / ((1.0 - 2.0 * p) * (1.0 - 4.0 * p)) * bracket)


def P_strip(t: float) -> tuple[float, float]:
    return (-3.0, -2.0 - 2.0 * abs(t) / LN2)


def P_star(t: float, s, inner_cap: int | None = None) -> complex:
    """Mellin transform in z of the shifted poissonized MGF P(t, z)."""
    if not (abs(t) <= asy.T_MAX):
        raise DomainError(f"t = {t} outside |t| <= {asy.T_MAX}")
    strip = P_strip(t)
    try:
        s = _point(s, strip).s
    except DomainError:
        raise DomainError(
            f"s outside the t-dependent strip <-3, -2 - 2|t|/ln 2> = <-3, {strip[1]:.12g}>"
        ) from None
    et = math.exp(t)
    one_m_et = -math.expm1(t)
    p = 2.0 ** s
    g = gamma(s + 2.0)
    cfg = asy.SeriesConfig(inner_cap=inner_cap)
    S = asy.inner_sum(-(s + 2.0), t, cfg)
    lead = et * et * p * one_m_et ** 2 * g / ((1.0 - 2.0 * p) * (1.0 - 4.0 * et * et * p))
    bracket = -8.0 * p * et / (1.0 - 4.0 * et * p) - 2.0 * et * S + (1.0 - 8.0 * p) / (4.0 * p)
    tail = 2.0 * p * et * et * one_m_et * g / ((1.0 - 2.0 * p) * (1.0 - 4.0 * et * p))
    return _out(lead * bracket + tail)


def fd_first(f, h: float = 1e-3):
    """Fourth-order central first derivative at 0."""
    return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)


def fd_second(f, h: float = 1e-3):
    """Fourth-order central second derivative at 0."""
    return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h)


# --------------------------------------------------------------------------
# residue expansions


def reciprocal_sum(K: int = 64) -> float:
    """sum_{k>=0} 1 / (1 + 2^{k+1})."""
    k = np.arange(K)
    return float(np.sum(1.0 / (1.0 + 2.0 ** (k + 1.0))))


def mean_residue_expansion(z: float, oscillations: bool = True) -> float:
    """E[C(N(z), 2) D_{N(z)}] from the poles at s = -2 and s = -1."""
    if z < 4:
        raise DomainError("expansion requires z >= 4")
    u = math.log2(z)
    e1 = asy.eta1(u) if oscillations else 0.0
    e2 = asy.eta2(u) if oscillations else 0.0
    return (z * z * u - z * z * e2 - z * z * (LN2 - 2.0 * EULER_GAMMA) / (2.0 * LN2)
            + z * (1.0 / LN2 + e1))


def second_moment_constant() -> float:
    """Coefficient of z^2 (after dividing by 1/ln^2 2) in the second moment."""
    return (PI ** 2 / 3.0 + 2.0 * EULER_GAMMA ** 2 - 2.0 * EULER_GAMMA * LN2
            + 11.0 / 3.0 * LN2 ** 2 - 2.0 * LN2 * asy.log_sum())


def second_moment_residue_expansion(z: float, oscillations: bool = True) -> float:
    """E[C(N(z), 2) D_{N(z)}^2] from the poles at s = -2 and s = -1."""
    if z < 4:
        raise DomainError("expansion requires z >= 4")
    u = math.log2(z)
    x1 = asy.xi1(u) if oscillations else 0.0
    x2 = asy.xi2(u) if oscillations else 0.0
    return (2.0 * z * z * u * u + 2.0 * z * z * u * (2.0 * EULER_GAMMA / LN2 - 1.0)
            + z * z / LN2 ** 2 * second_moment_constant()
            - z / LN2 * (1.5 - 2.0 * reciprocal_sum())
            + z * z * x1 - z * x2)


def poisson_moments(z: float, N: int | None = None) -> tuple[float, float]:
    """Poisson mixtures of C(n,2) E[D_n] and C(n,2) E[D_n^2]."""
    from .exact import poisson_mixture
    cap = poisson_cap(z) + 1 if N is None else N
    mt = moment_table(max(cap, 2))
    n = np.arange(len(mt.distance_mean))
    c2 = n * (n - 1) / 2.0
    first = c2 * mt.distance_mean
    second = c2 * mt.distance_second
    return poisson_mixture(z, first), poisson_mixture(z, second)


# --------------------------------------------------------------------------
# Mellin integral of B built from exact moments


def B_exact(z: float, N: int = 2000) -> float:
    """B(z) = sum_{n>=3} C(n,2) d_n P(N(z)=n) + z^2 (e^{-z} - 1)."""
    mt = moment_table(N)
    n = np.arange(3, N + 1)
    a = n * (n - 1) / 2.0 * mt.distance_mean[3:]
    return float(np.dot(poisson.pmf(n, z), a) + z * z * math.expm1(-z))


def B_mellin_numeric(s: float, Z: float = 500.0, N: int = 2000) -> float:
    """int_0^inf B(z) z^{s-1} dz for real s in <-3, -2>.

    Quadrature on [0, Z] (substituting z = x^2), plus the closed-form
    integral of the non-oscillating expansion beyond Z.
    """
    s = _point(s).s.real
    if poisson_cap(Z) > N:
        raise DomainError(f"n cap {N} too small for Z = {Z}; need {poisson_cap(Z)}")

    def f(x):
        z = x * x
        return B_exact(z, N) * z ** (s - 1.0) * 2.0 * x

    X = math.sqrt(Z)
    head, err = integrate.quad(f, 0.0, X, limit=400, epsabs=0.0, epsrel=1e-10)
    # tail: z^2 lg z - z^2 (1 + c) + z / ln 2, c = (ln 2 - 2 gamma)/(2 ln 2)
    c = (LN2 - 2.0 * EULER_GAMMA) / (2.0 * LN2)
    a2 = s + 2.0
    a1 = s + 1.0
    lnZ = math.log(Z)
    log_int = -Z ** a2 * lnZ / a2 + Z ** a2 / a2 ** 2
    pow2 = -Z ** a2 / a2
    pow1 = -Z ** a1 / a1
    tail = log_int / LN2 - (1.0 + c) * pow2 + pow1 / LN2
    return head + tail


# --------------------------------------------------------------------------
# characteristic-function inversion

CF_START_POINTS = 256
CF_MAX_POINTS = 1 << 16
CF_TOL = 1e-8
ASYMPTOTIC_POINTS = 1 << 12


def _support_bound(n: int) -> int:
    # P(D_n > m) <= 2 (n-1) 2^{-m/2} < 1e-14
    return int(math.ceil(2.0 * (math.log2(2.0 * n) + 47.0)))


def _exact_cf_grid(n: int, M: int) -> np.ndarray:
    """CF of D_n at u = 2 pi k / M, k = 0..M-1 (conjugate symmetry halves the work)."""
    u = 2.0 * PI * np.arange(M // 2 + 1) / M
    half = exact_cf(n, u)
    return np.concatenate([half, np.conj(half[-2:0:-1])])


@lru_cache(maxsize=32)
def _inverted(n: int, mode: str) -> Pmf:
    if n < 2:
        raise DomainError("distance needs n >= 2")
    fl = math.floor(2.0 * math.log2(n))
    if mode == "exact":
        M = max(CF_START_POINTS, 1 << (2 * _support_bound(n) - 1).bit_length())
        while True:
            cf = _exact_cf_grid(n, 2 * M)
            fine = np.real(np.fft.fft(cf)) / (2 * M)
            # the M-point rule uses every other node of the 2M-point rule
            coarse = np.real(np.fft.fft(cf[::2])) / M
            gap = max(np.max(np.abs(coarse - fine[:M])), np.max(np.abs(fine[M:])))
            if gap <= CF_TOL:
                break
            M *= 2
            if 2 * M > CF_MAX_POINTS:
                raise QuadratureError(
                    f"CF inversion for n = {n} not stable at {M} points (gap {gap:.3g})")
        masses = np.clip(np.where(np.abs(fine) < 1e-13, 0.0, fine), 0.0, None)
        return Pmf(-fl, masses, 2 * (n - 1) * 2.0 ** (-M / 2)).trimmed()
    if mode == "asymptotic":
        M = ASYMPTOTIC_POINTS
        u = 2.0 * PI * np.arange(M) / M
        cf = asy.cf_centered(n, u)
        masses = np.real(np.fft.fft(cf)) / M
        # index k holds r = k for k < M/2 and r = k - M above
        masses = np.roll(masses, M // 2)
        return Pmf(-(M // 2), masses, 0.0)
    raise DomainError(f"unknown mode {mode!r}; use 'exact' or 'asymptotic'")


def cf_invert_pmf(n: int, mode: str = "exact") -> Pmf:
    """Law of D_n - floor(2 lg n) from its characteristic function.

    In asymptotic mode the leading-order transform is inverted as is, so
    masses of order 1e-4 may be slightly negative.
    """
    return _inverted(int(n), mode)


def cf_invert(n: int, r: int, mode: str = "exact") -> float:
    """P(D_n - floor(2 lg n) = r)."""
    return cf_invert_pmf(n, mode)(int(r))
