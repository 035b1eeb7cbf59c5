"""Acceptance checks tying the exact, asymptotic and simulated engines together.

Each check returns a :class:`CriterionResult` carrying what was observed and
what was required.  The fast suite leaves out the n = 10^5 simulation and the
Mellin quadrature.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import asymptotics as asy
from . import exact
from . import montecarlo as mc
from . import transforms as tr
from .bitkeys import Key
from .special import LN2
from .trie import build_trie, distance

SEED = 20240601


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


class _Checks:
    """Collects sub-checks; each records observed vs required."""

    def __init__(self):
        self.ok = True
        self.parts: list[str] = []

    def le(self, name: str, observed: float, bound: float) -> None:
        good = bool(observed <= bound)
        self.ok &= good
        self.parts.append(f"{name}={observed:.4g}{'<=' if good else '>'}{bound:.4g}")

    def ge(self, name: str, observed: float, bound: float) -> None:
        good = bool(observed >= bound)
        self.ok &= good
        self.parts.append(f"{name}={observed:.4g}{'>=' if good else '<'}{bound:.4g}")

    def eq(self, name: str, observed, expected) -> None:
        good = observed == expected
        self.ok &= good
        self.parts.append(f"{name}={observed}{'==' if good else '!='}{expected}")

    def detail(self) -> str:
        return "; ".join(self.parts)


FIVE_KEYS = ("0.00111", "0.11011", "0.00011", "0.01010", "0.11111")


def five_key_reconstruction() -> _Checks:
    c = _Checks()
    trie = build_trie([Key.fixed(b) for b in FIVE_KEYS])
    c.eq("depths", trie.depths(), [3, 3, 3, 2, 3])
    c.eq("distance(X2,X4)", distance(trie, 1, 3), 5)
    return c


def two_key_closed_forms() -> _Checks:
    c = _Checks()
    mt = exact.moment_table(2)
    c.le("|E[D2]-4|", abs(mt.distance_mean[2] - 4.0), 1e-12)
    c.le("|Var[D2]-8|", abs(mt.distance_variance(2) - 8.0), 1e-12)
    ts = np.linspace(-0.1, 0.1, 21)
    gap = max(abs(exact.exact_mgf(2, t) - math.exp(2 * t) / (2 - math.exp(2 * t))) for t in ts)
    c.le("max|mgf-e^2t/(2-e^2t)|", gap, 1e-12)
    return c


def oracle_triangle(trials: int = 10 ** 6) -> _Checks:
    c = _Checks()
    for n in (3, 8, 32, 128):
        rep = mc.simulate_distance(n, trials, SEED + n)
        c.le(f"TV(n={n})", exact.total_variation(rep.empirical_pmf, exact.distance_pmf(n)), 0.01)
        d = exact.moment_table(n).distance_mean[n]
        c.le(f"z(n={n})", abs(rep.mean - d) / rep.std_error_of_mean, 4.0)
    return c


def _mean_gap(mt, n):
    return mt.distance_mean[n] - asy.mean_asymptotic(n).total


def mean_proposition() -> _Checks:
    c = _Checks()
    mt = exact.moment_table(8192)
    c.le("|gap(4096)|", abs(_mean_gap(mt, 4096)), 0.05)
    ratios = [abs(_mean_gap(mt, 4 * 2 ** k)) / abs(_mean_gap(mt, 2 ** k)) for k in range(6, 12)]
    c.le("mean gap(4n)/gap(n)", float(np.mean(ratios)), 0.7)
    return c


def variance_theorem() -> _Checks:
    c = _Checks()
    mt = exact.moment_table(4096)
    c.le("|var gap(4096)|", abs(mt.distance_variance(4096) - asy.variance_asymptotic(4096).total), 0.1)
    c.le("|alpha-7.227113|", abs(asy.alpha_constant() - 7.227113), 5e-6)
    steady = (2 * math.pi ** 2 + 19 * LN2 ** 2 - asy.alpha_constant()) / (3 * LN2 ** 2)
    c.le("|steady-formula|", abs(asy.variance_asymptotic(4096).steady - steady), 1e-12)
    return c


H_T_GRID = np.linspace(-0.1, 0.1, 21)
H_N_SAMPLES = sorted({int(round(2 ** x)) for x in np.linspace(1, 13, 121)})


def amplitude_bounds(grid: int = 10 ** 4) -> _Checks:
    c = _Checks()
    u = np.linspace(0.0, 1.0, grid)
    for name, f, bound in (("eta1", asy.eta1, 1.4261e-5), ("eta2", asy.eta2, 1.5732e-6),
                           ("xi", asy.xi, 5.6541e-5)):
        sup = float(np.max(np.abs(f(u))))
        c.le(f"sup|{name}|", sup, bound)
        c.ge(f"sup|{name}|", sup, 0.5 * bound)
    sup_h = max(abs(asy.H_n(t, n)) for t in H_T_GRID for n in H_N_SAMPLES)
    c.le("sup|H_n|", sup_h, 3e-4)
    c.ge("sup|H_n|", sup_h, 0.5 * 3e-4)
    return c


def oscillation_theorem(t: float = 0.1) -> _Checks:
    c = _Checks()
    phi = exact.mgf_sequence(8192, t)
    g = asy.G(t)
    low_dev, high_dev, values = 0.0, 0.0, []
    for n in range(2 ** 8, 2 ** 13 + 1):
        x = 2.0 * math.log2(n)
        fl, fr = math.floor(x), x - math.floor(x)
        v = phi[n] * math.exp(-t * fl)
        values.append(v)
        if fr < 0.02:
            low_dev = max(low_dev, abs(v - g))
        elif fr > 0.98:
            high_dev = max(high_dev, abs(v - math.exp(fr * t) * g))
    c.le("max|mgf*-G| ({2lg n}<0.02)", low_dev, 0.02)
    c.le("max|mgf*-e^({2lg n}t)G| ({2lg n}>0.98)", high_dev, 0.02 * math.exp(t))
    c.ge("spread", max(values) - min(values), 0.09)
    return c


LADDER_POINTS = (-2.9, -2.7, -2.5, -2.3, -2.1)


def transform_ladder() -> _Checks:
    c = _Checks()
    r1 = max(abs(tr.fd_first(lambda t: tr.P_star(t, s)) / tr.B_star(s) - 1) for s in LADDER_POINTS)
    r2 = max(abs(tr.fd_second(lambda t: tr.P_star(t, s)) / tr.L_star(s) - 1) for s in LADDER_POINTS)
    c.le("max rel dP*/dt vs B*", r1, 1e-5)
    c.le("max rel d2P*/dt2 vs L*", r2, 1e-5)
    c.le("max|P*(0,s)|", max(abs(tr.P_star(0.0, s)) for s in LADDER_POINTS), 1e-14)
    return c


def poissonization_closure() -> _Checks:
    c = _Checks()
    e1 = e2 = 0.0
    for z in (32, 64, 128):
        m1, m2 = tr.poisson_moments(z)
        e1 = max(e1, abs(tr.mean_residue_expansion(z) / m1 - 1))
        e2 = max(e2, abs(tr.second_moment_residue_expansion(z) / m2 - 1))
    c.le("max rel mean", e1, 1e-5)
    c.le("max rel second moment", e2, 1e-5)
    return c


def inversion() -> _Checks:
    c = _Checks()
    p = tr.cf_invert_pmf(64, "exact")
    q = exact.distance_pmf(64).shifted(-math.floor(2 * math.log2(64)))
    lo = min(p.support_offset, q.support_offset)
    hi = max(p.support[-1], q.support[-1])
    c.le("max|cf_invert-pmf| n=64", max(abs(p(r) - q(r)) for r in range(lo, hi + 1)), 1e-8)
    tv = exact.total_variation(tr.cf_invert_pmf(4096, "exact"), tr.cf_invert_pmf(4096, "asymptotic"))
    c.le("TV(asym, exact) n=4096", tv, 0.05)
    return c


def concentration(n: int = 10 ** 5, trials: int = 10 ** 4) -> _Checks:
    c = _Checks()
    rep = mc.simulate_distance(n, trials, SEED + 11)
    ratio = rep.samples / math.log2(n)
    c.ge("fraction in [1.5, 2.5]", float(np.mean((ratio >= 1.5) & (ratio <= 2.5))), 0.95)
    return c


def wiener_index_check(trials: int = 1000) -> _Checks:
    c = _Checks()
    mt = exact.moment_table(4096)
    worst = max(abs(n * (n - 1) / 2 * mt.distance_mean[n] - asy.wiener_mean_asymptotic(n)) / n ** 1.6
                for n in (2 ** k for k in range(6, 13)))
    c.le("max|C(n,2)d_n-W~|/n^1.6", worst, 5.0)
    rep = mc.simulate_wiener(1024, trials, SEED + 12)
    c.le("rel sim W(1024)", abs(rep.mean / asy.wiener_mean_asymptotic(1024) - 1), 0.03)
    return c


def mellin_quadrature() -> _Checks:
    c = _Checks()
    c.le("rel quad vs B*(-2.5)", abs(tr.B_mellin_numeric(-2.5) / tr.B_star(-2.5).real - 1), 1e-3)
    return c


CRITERIA: dict[int, tuple[str, Callable[[], _Checks]]] = {
    1: ("five-key trie reconstruction", five_key_reconstruction),
    2: ("two-key closed forms", two_key_closed_forms),
    3: ("exact vs simulated distance laws", oracle_triangle),
    4: ("mean asymptotics", mean_proposition),
    5: ("variance asymptotics", variance_theorem),
    6: ("oscillation amplitude bounds", amplitude_bounds),
    7: ("centred MGF oscillates between envelopes", oscillation_theorem),
    8: ("transform finite-difference ladder", transform_ladder),
    9: ("poissonized residue expansions", poissonization_closure),
    10: ("characteristic-function inversion", inversion),
    11: ("concentration of D_n / lg n", concentration),
    12: ("Wiener index mean", wiener_index_check),
    13: ("Mellin quadrature of B", mellin_quadrature),
}

SUITES = {
    "fast": tuple(k for k in CRITERIA if k not in (11, 13)),
    "full": tuple(CRITERIA),
}


def run_criterion(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        checks = fn()
        passed, detail = checks.ok, checks.detail()
    except Exception as exc:  # report, do not abort the suite
        passed, detail = False, f"error: {type(exc).__name__}: {exc}"
    return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - start)


def run_suite(suite: str = "fast") -> list[CriterionResult]:
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {sorted(SUITES)}")
    return [run_criterion(k) for k in SUITES[suite]]
