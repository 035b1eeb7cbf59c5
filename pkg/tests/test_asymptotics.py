import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trielab import asymptotics as asy
from trielab.errors import DomainError
from trielab.exact import exact_mgf, moment_table
from trielab.special import EULER_GAMMA, LN2

GRID = np.linspace(0.0, 1.0, 10 ** 4)
SERIES = {"eta1": asy.eta1, "eta2": asy.eta2, "xi1": asy.xi1, "xi2": asy.xi2,
          "xi3": asy.xi3, "xi": asy.xi}


def _mp_series(weight, u, J=6):
    """Independent high-precision evaluation of (1/ln 2) sum_{j != 0} w_j e^{-2 pi i j u}."""
    mp.mp.dps = 30
    L = mp.log(2)
    total = mp.mpf(0)
    for j in range(1, J + 1):
        chi = 2j * mp.pi * j / L
        total += 2 * mp.re(weight(chi) * mp.exp(-2j * mp.pi * j * u))
    return float(total / L)


def _mp_S(w):
    return mp.nsum(lambda k: 1 - (1 + mp.mpf(2) ** -(k + 1)) ** (-w), [0, mp.inf])


@pytest.mark.parametrize("u", [0.0, 0.13, 0.5, 0.77])
def test_series_against_mpmath(u):
    assert asy.eta1(u) == pytest.approx(_mp_series(lambda c: mp.gamma(1 + c), u), abs=1e-18)
    assert asy.eta2(u) == pytest.approx(_mp_series(mp.gamma, u), abs=1e-19)
    x3 = _mp_series(lambda c: mp.gamma(c) * (_mp_S(c) - 2 * mp.digamma(c) / mp.log(2)), u)
    assert asy.xi3(u) == pytest.approx(x3, abs=1e-18)
    x2 = _mp_series(lambda c: mp.gamma(1 + c) * (mp.mpf(1.5) - 2 * _mp_S(1 + c)), u)
    assert asy.xi2(u) == pytest.approx(x2, abs=1e-17)


def test_amplitude_bounds():
    assert np.max(np.abs(asy.eta1(GRID))) <= 1.4261e-5
    assert np.max(np.abs(asy.eta2(GRID))) <= 1.5732e-6
    assert np.max(np.abs(asy.xi(GRID))) <= 5.6541e-5


@pytest.mark.parametrize("name", ["eta1", "eta2", "xi2", "xi3", "xi"])
def test_period_one(name):
    f = SERIES[name]
    for u in (0.3, 0.71, 2.2):
        assert abs(f(u + 1) - f(u)) < 1e-15


def test_xi1_carries_linear_term():
    # the -4u term makes xi1 shift by -4 eta2 per unit step
    for u in (0.3, 0.8):
        assert abs(asy.xi1(u + 1) - asy.xi1(u) + 4 * asy.eta2(u)) < 1e-15


@pytest.mark.parametrize("kind", ["eta1", "eta2", "xi1", "xi2", "xi3"])
def test_series_are_real(kind):
    z = asy.fourier_series(kind, GRID)
    assert np.max(np.abs(z.imag)) < 1e-16


@pytest.mark.parametrize("name", list(SERIES))
def test_truncation_stable(name):
    f = SERIES[name]
    small, big = asy.SeriesConfig(fourier_cap=4), asy.SeriesConfig(fourier_cap=16)
    for u in (0.0, 0.37):
        assert abs(f(u, small) - f(u, big)) < 1e-15


def test_certified_tails():
    assert asy.DEFAULT_CONFIG.certify() < 1e-15


def test_xi_composition_two_paths():
    u = np.linspace(0, 1, 50)
    direct = asy.xi(u)
    e2 = np.array([asy.eta2(float(x)) for x in u])
    x3 = np.array([asy.xi3(float(x)) for x in u])
    manual = (16 * LN2 + 8 * EULER_GAMMA) / LN2 * e2 - 4 * e2 ** 2 - 4 * x3
    assert np.max(np.abs(direct - manual)) < 1e-16


def test_alpha_constant():
    assert abs(asy.alpha_constant() - 7.227113) < 5e-6
    mp.mp.dps = 30
    ref = 12 * mp.log(2) * mp.nsum(lambda k: mp.log(1 + mp.mpf(2) ** -(k + 1)), [0, mp.inf])
    assert asy.alpha_constant() == pytest.approx(float(ref), abs=1e-14)
    assert asy.alpha_constant() > 0
    # truncation after K terms is within the geometric tail bound
    gap = abs(asy.alpha_constant(40) - asy.alpha_constant(80))
    assert gap <= asy.alpha_tail_bound(40)
    assert abs(asy.alpha_constant(60) - asy.alpha_constant(80)) < 1e-15


def test_mean_constant_and_steady_values():
    mp.mp.dps = 30
    c = (2 * mp.euler - mp.log(2)) / mp.log(2)
    assert asy.MEAN_CONSTANT == pytest.approx(float(c), abs=1e-15)
    v = asy.mean_asymptotic(1024)
    assert v.steady == pytest.approx(20 + float(c), abs=1e-13)
    assert v.total == v.steady + v.oscillation
    assert abs(v.oscillation) <= 2 * 1.5732e-6
    alpha = 12 * mp.log(2) * mp.nsum(lambda k: mp.log(1 + mp.mpf(2) ** -(k + 1)), [0, mp.inf])
    steady = (2 * mp.pi ** 2 + 19 * mp.log(2) ** 2 - alpha) / (3 * mp.log(2) ** 2)
    assert asy.variance_constant() == pytest.approx(float(steady), abs=1e-13)
    assert asy.variance_constant() == pytest.approx(15.01409615, abs=1e-8)
    w = asy.variance_asymptotic(3000)
    assert w.total == w.steady + w.oscillation and abs(w.oscillation) <= 5.6541e-5


def test_against_exact_moments():
    mt = moment_table(8192)
    assert abs(asy.mean_asymptotic(4096).total - mt.distance_mean[4096]) < 0.05
    assert abs(asy.variance_asymptotic(4096).total - mt.distance_variance(4096)) < 0.1
    mean_ratio = np.mean([abs(mt.distance_mean[4 * n] - asy.mean_asymptotic(4 * n).total)
                          / abs(mt.distance_mean[n] - asy.mean_asymptotic(n).total)
                          for n in (2 ** k for k in range(6, 12))])
    var_ratio = np.mean([abs(mt.distance_variance(4 * n) - asy.variance_asymptotic(4 * n).total)
                         / abs(mt.distance_variance(n) - asy.variance_asymptotic(n).total)
                         for n in (2 ** k for k in range(6, 12))])
    assert mean_ratio <= 0.7 and var_ratio <= 0.7


def test_G_values():
    assert asy.G(0.0) == 1.0
    ts = np.linspace(-0.1, 0.1, 201)
    assert min(asy.G(t) for t in ts) >= 0.98
    assert 1.14 <= asy.G(0.1) <= 1.16
    with pytest.raises(DomainError):
        asy.G(0.11)


def test_G_small_t_branch_is_continuous():
    c = asy.MEAN_CONSTANT
    for t in (9.99e-7, -9.99e-7):
        assert asy.G(t) == 1 + c * t
        # just outside the branch the full formula differs only at second order
        outside = 1.002 * t
        assert abs(asy.G(outside) - (1 + c * outside)) < 1e-11
    slope = (asy.G(1e-4) - asy.G(-1e-4)) / 2e-4
    assert slope == pytest.approx(asy.MEAN_CONSTANT, abs=1e-6)


def test_H_properties():
    for n in (2, 3, 100, 5000):
        assert asy.H_n(0.0, n) == 0.0
    for n in (3, 37, 1000):
        for t in (-0.1, 0.05, 0.1):
            assert abs(asy.H_n(t, 2 * n) - asy.H_n(t, n)) < 1e-15
    ts = np.linspace(-0.1, 0.1, 11)
    assert max(abs(asy.H_n(t, n)) for t in ts for n in range(2, 8193, 97)) <= 3e-4
    with pytest.raises(DomainError):
        asy.H_n(0.2, 10)


def test_H_slope_at_zero_is_minus_two_eta2():
    # d/dt of the centred MGF at 0 is the mean correction -2 eta2(lg n)
    for n in (3, 1000, 5000):
        slope = (asy.H_n(1e-4, n) - asy.H_n(-1e-4, n)) / 2e-4
        assert slope == pytest.approx(-2 * asy.eta2(math.log2(n)), rel=1e-6, abs=1e-15)


def test_mgf_shapes():
    for n in (2, 100, 4096):
        assert asy.mgf_centered(n, 0.0) == 1.0 and asy.mgf_asymptotic(n, 0.0) == 1.0
    for m in (8, 12):
        n = 2 ** m
        assert asy.mgf_centered(n, 0.07) == pytest.approx(asy.G(0.07) + asy.H_n(0.07, n), rel=1e-15)
    n = 3000
    assert asy.mgf_asymptotic(n, 0.05) == pytest.approx(
        asy.mgf_centered(n, 0.05) * math.exp(0.05 * math.floor(2 * math.log2(n))), rel=1e-13)
    centred_exact = exact_mgf(4096, 0.05) * math.exp(-0.05 * 24)
    assert abs(asy.mgf_centered(4096, 0.05) - centred_exact) < 0.05
    with pytest.raises(DomainError):
        asy.mgf_centered(10, -0.2)


def test_cf_centered_continuity_at_removable_points():
    n = 1000
    for u0 in (math.pi, 2 * math.pi - 1e-3):
        a = asy.cf_centered(n, u0)
        b = asy.cf_centered(n, u0 + 1e-4)
        assert abs(a - b) < 1e-3
    assert asy.cf_centered(n, 0.0) == 1.0
    assert abs(asy.cf_centered(n, 1e-8) - 1) < 1e-6


def test_envelopes():
    assert asy.envelopes(0.0) == (1.0, 1.0)
    lo, hi = asy.envelopes(0.1)
    assert lo <= 1.148 + 0.001 and hi >= 1.267 - 0.001
    for t in (-0.1, -0.03, 0.04, 0.1):
        lo, hi = asy.envelopes(t)
        assert hi / lo == pytest.approx(math.exp(abs(t)), rel=1e-15)


def test_wiener_mean_asymptotic():
    mt = moment_table(4096)
    for k in range(6, 13):
        n = 2 ** k
        exact_w = n * (n - 1) / 2 * mt.distance_mean[n]
        assert abs(asy.wiener_mean_asymptotic(n) - exact_w) <= 5 * n ** 1.6
    for n in (1000, 5000):
        ratio = asy.wiener_mean_asymptotic(2 * n) / asy.wiener_mean_asymptotic(n)
        assert ratio == pytest.approx(4 * math.log2(2 * n) / math.log2(n), rel=0.05)


def test_wiener_two_keys_gap_is_reported():
    # purely informative: the expansion is asymptotic only
    gap = asy.wiener_mean_asymptotic(2) - moment_table(2).distance_mean[2]
    print(f"n = 2 Wiener expansion gap: {gap:.6f}")
    assert math.isfinite(gap)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5))
def test_eta_grid_real_property(u):
    assert abs(np.imag(asy.fourier_series("eta2", u))) < 1e-16
