"""Closed-form large-n behaviour of the pairwise distance.

Oscillating parts are Fourier series in u = lg n whose weights decay like
|Gamma(a + i y)| ~ sqrt(2 pi) |y|^(a - 1/2) exp(-pi |y| / 2), with
y = 2 pi j / ln 2.  The j = 1 term already carries the factor exp(-14.2),
so a handful of frequencies reach double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .special import EULER_GAMMA, LN2, PI, digamma, gamma

T_MAX = 0.1
SMALL_T = 1e-6
OMEGA = 2.0 * PI / LN2          # Fourier frequency step in the Mellin plane

MEAN_CONSTANT = (2.0 * EULER_GAMMA - LN2) / LN2


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation of the oscillating sums.

    ``fourier_cap`` is the largest |j| kept; ``inner_cap`` fixes the number of
    terms of the inner sums over k (None chooses it from ``term_floor``).
    """

    fourier_cap: int = 8
    inner_cap: int | None = None
    term_floor: float = 1e-18

    def inner_terms(self, power_abs: float, growth: float = 0.0) -> int:
        """Terms needed so e^{growth k} |power| 2^{-k-1} < term_floor."""
        if self.inner_cap is not None:
            return self.inner_cap
        rate = LN2 - growth
        need = (math.log(max(power_abs, 1.0)) - math.log(self.term_floor)) / rate
        return int(math.ceil(need)) + 2

    def fourier_tail_bound(self, shift: float = 0.0) -> float:
        """Bound on sum_{j > J} |Gamma(shift + i j omega)| for shift in [0, 1]."""
        total = 0.0
        for j in range(self.fourier_cap + 1, self.fourier_cap + 200):
            y = j * OMEGA
            # |Gamma(iy)|^2 = pi / (y sinh(pi y)); |Gamma(1+iy)| = y |Gamma(iy)|
            g = math.sqrt(PI / (y * math.sinh(PI * y))) if y < 200 else 0.0
            total += g * max(1.0, y) ** shift
        return total

    def certify(self) -> float:
        bound = max(self.fourier_tail_bound(0.0), self.fourier_tail_bound(1.0))
        if self.inner_cap is None:
            bound = max(bound, self.term_floor)
        return bound


DEFAULT_CONFIG = SeriesConfig()


@dataclass(frozen=True)
class AsymptoticValue:
    steady: float
    oscillation: float
    error_order: str
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.steady + self.oscillation)


# --------------------------------------------------------------------------
# building blocks


def inner_sum(power, t=0.0, config: SeriesConfig = DEFAULT_CONFIG):
    """sum_{k>=0} e^{t k} [1 - (1 + 2^{-k-1})^power] for complex ``power``.

    Vectorised over ``power`` (and ``t`` broadcast against it).
    """
    power = np.asarray(power, dtype=complex)
    t = np.asarray(t, dtype=complex)
    growth = float(np.max(np.abs(t.real))) if t.size else 0.0
    K = config.inner_terms(float(np.max(np.abs(power))) if power.size else 1.0, growth)
    k = np.arange(K)
    logs = np.log1p(2.0 ** -(k + 1.0))
    p = power[..., None]
    terms = np.exp(t[..., None] * k) * -np.expm1(p * logs)
    return terms.sum(axis=-1)


def log_sum(K: int | None = None) -> float:
    """sum_{k>=0} ln(1 + 2^{-k-1}); the tail after K terms is below 2^{-K}."""
    if K is None:
        K = 64
    k = np.arange(K)
    return float(np.sum(np.log1p(2.0 ** -(k + 1.0))))


def alpha_constant(K: int | None = None) -> float:
    """12 ln 2 sum_k ln(1 + 2^{-k-1}) (about 7.2271128)."""
    return 12.0 * LN2 * log_sum(K)


def alpha_tail_bound(K: int) -> float:
    return 12.0 * LN2 * 2.0 ** -K


def _frequencies(J: int) -> np.ndarray:
    j = np.arange(1, J + 1)
    return np.concatenate([-j[::-1], j])


@lru_cache(maxsize=32)
def _weights(kind: str, config: SeriesConfig) -> tuple[np.ndarray, np.ndarray]:
    j = _frequencies(config.fourier_cap)
    chi = 1j * OMEGA * j
    if kind == "eta1":
        w = gamma(1.0 + chi)
    elif kind == "eta2":
        w = gamma(chi)
    elif kind == "xi3":
        w = gamma(chi) * (inner_sum(-chi, config=config) - 2.0 * digamma(chi) / LN2)
    elif kind == "xi1":
        w = gamma(chi) * (10.0 - 2.0 * inner_sum(-chi, config=config) + 4.0 * digamma(chi) / LN2)
    elif kind == "xi2":
        w = gamma(1.0 + chi) * (1.5 - 2.0 * inner_sum(-(1.0 + chi), config=config))
    else:
        raise ValueError(kind)
    w = np.asarray(w / LN2)
    w.flags.writeable = False
    return j, w


def fourier_series(kind: str, u, config: SeriesConfig = DEFAULT_CONFIG):
    """Complex value of sum_{j != 0} w_j e^{-2 pi i j u} (imaginary part ~ 0)."""
    j, w = _weights(kind, config)
    u = np.asarray(u, dtype=float)
    phase = np.exp(-2j * PI * np.multiply.outer(u, j))
    out = phase @ w
    return out


def _real(z):
    z = np.real(z)
    return float(z) if np.ndim(z) == 0 else z


# --------------------------------------------------------------------------
# oscillating functions


def eta1(u, config: SeriesConfig = DEFAULT_CONFIG):
    return _real(fourier_series("eta1", u, config))


def eta2(u, config: SeriesConfig = DEFAULT_CONFIG):
    return _real(fourier_series("eta2", u, config))


def xi3(u, config: SeriesConfig = DEFAULT_CONFIG):
    return _real(fourier_series("xi3", u, config))


def xi1(u, config: SeriesConfig = DEFAULT_CONFIG):
    """The z^2 oscillation of the second Poisson moment, including its -4u term."""
    return _real(fourier_series("xi1", u, config)) - 4.0 * np.asarray(u) * eta2(u, config)


def xi2(u, config: SeriesConfig = DEFAULT_CONFIG):
    return _real(fourier_series("xi2", u, config))


XI_ETA2_COEFF = (16.0 * LN2 + 8.0 * EULER_GAMMA) / LN2


def compose_xi(e2, x3):
    return XI_ETA2_COEFF * e2 - 4.0 * e2 * e2 - 4.0 * x3


def xi(u, config: SeriesConfig = DEFAULT_CONFIG):
    """Oscillation of the variance."""
    return compose_xi(eta2(u, config), xi3(u, config))


# --------------------------------------------------------------------------
# mean, variance, Wiener index


def _lg(n: int) -> float:
    if n < 2:
        raise DomainError("n must be at least 2")
    return math.log2(n)


def mean_asymptotic(n: int, config: SeriesConfig = DEFAULT_CONFIG) -> AsymptoticValue:
    u = _lg(n)
    return AsymptoticValue(2.0 * u + MEAN_CONSTANT, -2.0 * eta2(u, config), "O(n^-0.4999)")


def variance_constant() -> float:
    return (2.0 * PI ** 2 + 19.0 * LN2 ** 2 - alpha_constant()) / (3.0 * LN2 ** 2)


def variance_asymptotic(n: int, config: SeriesConfig = DEFAULT_CONFIG) -> AsymptoticValue:
    u = _lg(n)
    return AsymptoticValue(variance_constant(), xi(u, config), "O(n^-0.4999)")


def wiener_mean_asymptotic(n: int, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """n^2 lg n - ((ln 2 - 2 gamma)/(2 ln 2) + eta2(lg n)) n^2."""
    u = _lg(n)
    return n * n * u - ((LN2 - 2.0 * EULER_GAMMA) / (2.0 * LN2) + eta2(u, config)) * n * n


# --------------------------------------------------------------------------
# moment generating function


def _check_t(t: float) -> None:
    if not (abs(t) <= T_MAX):
        raise DomainError(f"t = {t} outside the validated domain |t| <= {T_MAX}")


def _bracket(t, power, config):
    et = np.exp(t)
    return 0.5 * (et * et - et - 2.0) - np.expm1(t) * inner_sum(power, t, config)


def G_complex(t, config: SeriesConfig = DEFAULT_CONFIG):
    """Envelope function for any complex t with |Re t| < ln(2)/2 (t != 0)."""
    t = complex(t)
    if abs(t) < SMALL_T:
        return 1.0 + MEAN_CONSTANT * t
    et = np.exp(t)
    pref = 2.0 * gamma(-2.0 * t / LN2) * np.exp(3.0 * t) * -np.expm1(t) / ((1.0 - 2.0 * et * et) * LN2)
    return complex(pref * _bracket(t, 2.0 * t / LN2, config))


def H_complex(t, lg_n: float, config: SeriesConfig = DEFAULT_CONFIG, pole_step: float = 1e-5):
    """Oscillating correction for complex t, phase given by lg n.

    At t = i pi j the j-th Gamma factor meets a pole; the product is finite
    there and is replaced by the average of its two neighbours.
    """
    t = complex(t)
    total = 0.0 + 0.0j
    for j in _frequencies(config.fourier_cap):
        arg = (-2.0 * t + 2j * PI * j) / LN2
        if abs(arg) < 1e-9:
            total += 0.5 * (_h_term(t + 1j * pole_step, j, lg_n, config)
                            + _h_term(t - 1j * pole_step, j, lg_n, config))
        else:
            total += _h_term(t, j, lg_n, config)
    return total


def _h_term(t, j, lg_n, config):
    et = np.exp(t)
    arg = (-2.0 * t + 2j * PI * j) / LN2
    pref = 2.0 * np.exp(3.0 * t) * -np.expm1(t) * gamma(arg) \
        * np.exp(-2j * PI * j * lg_n) / ((1.0 - 2.0 * et * et) * LN2)
    return complex(pref * _bracket(t, -arg, config))


def G(t: float, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Fixed envelope of the centred distance MGF; G(0) = 1."""
    _check_t(t)
    return float(np.real(G_complex(t, config)))


def H_n(t: float, n: int, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Oscillating correction; depends on n only through lg n mod 1."""
    _check_t(t)
    if t == 0:
        return 0.0
    return float(np.real(H_complex(t, _lg(n) % 1.0, config)))


def frac_two_lg(n: int) -> float:
    """{2 lg n}; double precision is adequate for n well below 2^40."""
    x = 2.0 * _lg(n)
    return x - math.floor(x)


def mgf_centered(n: int, t: float, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Leading-order E exp(t (D_n - floor(2 lg n)))."""
    _check_t(t)
    if t == 0:
        return 1.0
    return (G(t, config) + H_n(t, n, config)) * math.exp(frac_two_lg(n) * t)


def mgf_asymptotic(n: int, t: float, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Leading-order E exp(t D_n) = n^{2t/ln 2} (G(t) + H_n(t))."""
    _check_t(t)
    if t == 0:
        return 1.0
    return (G(t, config) + H_n(t, n, config)) * math.exp(2.0 * t * _lg(n))


def cf_centered(n: int, u, config: SeriesConfig = DEFAULT_CONFIG):
    """Leading-order characteristic function of D_n - floor(2 lg n)."""
    lg_n = _lg(n) % 1.0
    fr = frac_two_lg(n)
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty(uu.shape, dtype=complex)
    for i, x in enumerate(uu):
        t = 1j * x
        if x == 0:
            out[i] = 1.0
        else:
            out[i] = (G_complex(t, config) + H_complex(t, lg_n, config)) * np.exp(fr * t)
    return out if np.ndim(u) else complex(out[0])


def envelopes(t: float, config: SeriesConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(inf, sup) over n of G(t) e^{{2 lg n} t}."""
    g = G(t, config)
    hi = g * math.exp(t)
    return (g, hi) if t >= 0 else (hi, g)
