import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zladder.errors import DomainError
from zladder.ladder import (ONE_MINUS_C, PrimeTable, disjointness_report, expint_ei, ladder_image, li,
                            map_set, phi_half, prime_pi, primes_up_to, riemann_r, sieve_bound)
from zladder.sets import DisjointSet, build_set

SMALL = PrimeTable(10**6)


def test_small_prime_counts():
    assert prime_pi(100) == 25
    assert prime_pi(10**6) == 78498
    assert prime_pi(2) == 1 and prime_pi(2.9) == 1


def test_sieve_matches_trial_division():
    def is_prime(n):
        return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))

    expected = [n for n in range(3000) if is_prime(n)]
    assert primes_up_to(2999, segment=97).tolist() == expected


def test_prime_pi_domain():
    with pytest.raises(DomainError):
        prime_pi(1.5)


def test_sieve_bound_env(monkeypatch):
    monkeypatch.setenv("ZL_SIEVE_BOUND", "1e5")
    assert sieve_bound() == 100_000
    table = PrimeTable()
    assert table.bound == 100_000


def test_above_bound_uses_analytic_count():
    small = PrimeTable(10**4)
    exact = prime_pi(1e6)
    assert prime_pi(1e6, small) != exact
    assert abs(prime_pi(1e6, small) - exact) / exact < 1e-3


@pytest.mark.parametrize("x", [0.5, 3.0, 49.9, 50.1, 200.0])
def test_expint_matches_mpmath(x):
    assert expint_ei(x) == pytest.approx(float(mp.ei(x)), rel=1e-12)


def test_li_and_riemann_r_against_mpmath():
    for t in (1e3, 1e8, 1e15):
        assert li(t) == pytest.approx(float(mp.li(t)), rel=1e-12)
        assert riemann_r(t) == pytest.approx(float(mp.riemannr(t)), rel=1e-12)


def test_large_scale_count():
    assert prime_pi(1e10, SMALL) == pytest.approx(455052511, rel=1e-4)


def test_phi_half_values():
    assert phi_half(100) == pytest.approx(100 - ONE_MINUS_C * 25, abs=1e-12)
    assert phi_half(1e8) / 1e8 > 0.95


def test_phi_half_increasing_on_grid():
    # unit steps: each prime lowers the value by 1 - c < 1
    t = np.arange(2.0, 2e5)
    assert np.all(np.diff(phi_half(t, SMALL)) > 0)


@pytest.mark.parametrize("T", [1e4, 1e6, 1e10])
def test_round_trip(T):
    img = ladder_image(T, SMALL)
    assert img > T
    assert abs(phi_half(img, SMALL) - T) / T < 1e-6
    assert img - T == pytest.approx(ONE_MINUS_C * prime_pi(img, SMALL), rel=1e-6)


def test_ladder_image_increasing():
    T = np.linspace(1e3, 1e5, 4001)
    assert np.all(np.diff(ladder_image(T, SMALL)) > 0)


def test_map_set_preserves_structure():
    s = build_set("G5", -0.8, 0.9, 1e5, 500.0)
    img = map_set(s, SMALL)
    assert len(img) == len(s)
    assert np.all(img.lo > s.lo) and np.all(img.hi[:-1] < img.lo[1:])
    assert len(map_set(DisjointSet.empty(), SMALL)) == 0


def test_report_flags_unreached_regime():
    rep = disjointness_report(1e5, 1.5e4, 0.01, SMALL)
    assert not rep.disjoint and not rep.regime_reached
    assert rep.d == pytest.approx(rep.T_ring - rep.T - rep.U, rel=1e-12)
    assert rep.notes


def test_report_small_window_limit():
    rep = disjointness_report(1e6, 1e-9, 0.01, SMALL)
    assert rep.d == pytest.approx(ONE_MINUS_C * prime_pi(rep.T_ring, SMALL), rel=1e-6)


def test_report_rejects_bad_input():
    with pytest.raises(DomainError):
        disjointness_report(-1.0, 10.0)


def test_receding_gap():
    gaps = [disjointness_report(T, T ** (13 / 16), 0.01, SMALL).d for T in (1e18, 1e19, 1e20)]
    assert gaps[0] < gaps[1] < gaps[2]


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e3, max_value=1e15))
def test_round_trip_property(T):
    assert abs(phi_half(ladder_image(T, SMALL), SMALL) - T) / T < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1e3, max_value=1e12), st.floats(min_value=1e-6, max_value=1e3))
def test_ladder_image_monotone_property(T, h):
    assert ladder_image(T + h * T * 1e-3, SMALL) >= ladder_image(T, SMALL)
