import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trielab.errors import GammaPoleError
from trielab.special import EULER_GAMMA, LN2, PI, digamma, gamma, log_gamma

OMEGA = 2 * PI / LN2

away_from_poles = st.complex_numbers(max_magnitude=60, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z.imag) > 1e-3 or z.real > 0.05)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_constants():
    assert abs(EULER_GAMMA - 0.5772156649) < 1e-10
    assert EULER_GAMMA == pytest.approx(float(mp.euler), abs=1e-16)
    assert LN2 == math.log(2)


def test_known_values():
    assert abs(gamma(1.0) - 1) < 1e-13
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-13
    assert abs(gamma(-0.5) + 2 * math.sqrt(math.pi)) < 1e-13
    assert abs(gamma(5.0) - 24) < 1e-12


def test_modulus_identity_on_imaginary_axis():
    y = OMEGA
    assert abs(abs(gamma(1j * y)) ** 2 - math.pi / (y * math.sinh(math.pi * y))) < 1e-12


def test_decay_envelope():
    y = OMEGA
    assert abs(gamma(-1 + 1j * y)) < y ** -1.5 * math.exp(-math.pi * y / 2) * 10


@pytest.mark.parametrize("z", [0.3, 2.5 + 3j, -2.5 + 0.3j, 1j * OMEGA, 1 + 2j * OMEGA,
                               -0.5 + 40j, 70.2 - 5j, -13.4 + 0.1j, 3j * OMEGA])
def test_gamma_against_mpmath(z):
    assert rel(gamma(z), complex(mp.gamma(z))) < 1e-12
    assert rel(digamma(z), complex(mp.digamma(z))) < 1e-10


@pytest.mark.parametrize("z", [0.7, 3 + 4j, 50 + 50j, 90.0])
def test_log_gamma_principal_right_half_plane(z):
    assert abs(log_gamma(z) - complex(mp.loggamma(z))) < 1e-11 * max(1, abs(mp.loggamma(z)))


def test_log_gamma_exponentiates_to_gamma_everywhere():
    for z in (-2.5 + 0.3j, -7.1 + 2j, 0.2 - 9j):
        assert rel(cmath.exp(log_gamma(z)), gamma(z)) < 1e-11


def test_vectorised_matches_scalar():
    z = np.array([0.5, 1 + 1j, -2.5 + 3j, 1j * OMEGA])
    out = gamma(z)
    assert out.shape == z.shape
    assert all(out[i] == gamma(complex(z[i])) for i in range(len(z)))


@pytest.mark.parametrize("pole", [0, -1, -2, -7])
def test_poles_raise_with_integer(pole):
    with pytest.raises(GammaPoleError) as info:
        gamma(float(pole))
    assert info.value.pole == pole
    assert "gamma pole" in str(info.value)
    with pytest.raises(GammaPoleError):
        digamma(pole)
    with pytest.raises(GammaPoleError):
        log_gamma(complex(pole))


def test_digamma_identities():
    assert abs(digamma(1.0) + EULER_GAMMA) < 1e-12
    s = 2.5 + 3j
    assert abs(digamma(s + 1) - digamma(s) - 1 / s) < 1e-11
    s = 0.5 + 9.06j
    assert abs(digamma(s.conjugate()) - digamma(s).conjugate()) < 1e-14


@settings(max_examples=200, deadline=None)
@given(away_from_poles.filter(lambda z: abs(z.imag) > 1e-3))
def test_reflection_formula(s):
    value = gamma(s) * gamma(1 - s) * cmath.sin(math.pi * s) / math.pi
    assert abs(value - 1) < 1e-11 * max(1.0, abs(s))


@settings(max_examples=50, deadline=None)
@given(away_from_poles)
def test_conjugate_symmetry(s):
    assert abs(gamma(s.conjugate()) - gamma(s).conjugate()) <= 1e-15 * abs(gamma(s)) + 1e-300
    assert abs(digamma(s.conjugate()) - digamma(s).conjugate()) <= 1e-14 * abs(digamma(s)) + 1e-14


@settings(max_examples=100, deadline=None)
@given(away_from_poles.filter(lambda z: abs(z) < 20))
def test_recurrence(s):
    assert rel(gamma(s + 1), s * gamma(s)) < 1e-12
