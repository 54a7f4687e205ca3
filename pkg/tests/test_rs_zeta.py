import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zladder.errors import DomainError
from zladder.rs_zeta import (ShiftTriple, remainder_coefficients, theta1, theta1_deriv,
                             theta_rs, z, z_breakpoints, z_triple, z_triple_values, z_values,
                             z_with_bounds)


def siegelz(t: float) -> float:
    with mp.workdps(30):
        return float(mp.siegelz(t))


def test_z_vanishes_at_first_zeros(zeta_zeros):
    assert zeta_zeros.size == 50
    assert np.max(np.abs(z_values(zeta_zeros))) < 1e-4


def test_z_changes_sign_across_each_zero(zeta_zeros):
    lo, hi = z_values(zeta_zeros - 1e-3), z_values(zeta_zeros + 1e-3)
    assert np.all(np.sign(lo) != np.sign(hi))


@pytest.mark.parametrize("t", [50.5, 250.0, 1234.5, 5.5e4, 9.99e6])
def test_z_matches_mpmath(t):
    assert abs(z(t).value - siegelz(t)) < 1e-6


def test_error_bound_covers_actual_error(rng):
    ts = np.concatenate([[10.0, 11.5, 14.0, 20.0], rng.uniform(1e3, 1e6, 40)])
    val, err = z_with_bounds(ts)
    ref = np.array([siegelz(t) for t in ts])
    assert np.all(np.abs(val - ref) <= err)


def test_scalar_and_array_paths_agree():
    ts = np.array([100.0, 2000.0, 3.3e5])
    assert [z(t).value for t in ts] == list(z_values(ts))


def test_threads_do_not_change_values(rng):
    ts = rng.uniform(1e4, 1e5, 50_000)
    assert np.array_equal(z_values(ts, threads=1), z_values(ts, threads=3))


@pytest.mark.parametrize("t", [5.0, -1.0, float("nan")])
def test_out_of_domain_raises(t):
    with pytest.raises(DomainError):
        z_values(np.array([t]))


def test_theta_rs_matches_mpmath_siegeltheta():
    for t in (20.0, 1e3, 1e5, 1e7):
        with mp.workdps(40):
            ref = mp.siegeltheta(t)
        assert abs(float(theta_rs(np.longdouble(t)) - np.longdouble(mp.nstr(ref, 30)))) < 1e-9


def test_theta1_longdouble_against_mpmath():
    t = np.longdouble("9876543.21")
    with mp.workdps(40):
        tt = mp.mpf("9876543.21")
        ref = tt / 2 * mp.log(tt / (2 * mp.pi)) - tt / 2 - mp.pi / 8
    assert abs(float(theta1(t) - np.longdouble(mp.nstr(ref, 30)))) < 1e-9


@pytest.mark.parametrize("t", [1e3, 1e5, 1e7])
def test_theta1_derivative_matches_finite_difference(t):
    h = np.longdouble(1e-4)
    tl = np.longdouble(t)
    fd = (theta1(tl + h) - theta1(tl - h)) / (2 * h)
    assert abs(float(theta1_deriv(tl) - fd)) < 1e-6


def test_first_gram_point():
    # theta(g_0) = 0 at g_0 ~ 17.8456; Z is positive there
    with mp.workdps(30):
        g0 = float(mp.findroot(mp.siegeltheta, 17.8))
    # the asymptotic phase series is only good to ~2e-10 this low
    assert abs(float(theta_rs(np.longdouble(g0)))) < 1e-9
    assert z(g0).value > 0


def test_remainder_coefficients_reproduce_c0_closed_form():
    coef = remainder_coefficients()
    for p in (0.1, 0.37, 0.5, 0.8):
        u = p - 0.5
        c0 = np.polyval(coef[0][::-1], u)
        ref = math.cos(2 * math.pi * (p * p - p - 1 / 16)) / math.cos(2 * math.pi * p)
        assert c0 == pytest.approx(ref, rel=1e-13)


def test_shift_triple_matches_product():
    sh = ShiftTriple.at(1e5, 0.1, -0.2, 0.3)
    t = np.array([1e5 + 1.0, 1e5 + 2.5])
    direct = z_values(t + 0.1) * z_values(t - 0.2) * z_values(t + 0.3)
    assert np.allclose(z_triple_values(t, sh), direct, rtol=0, atol=1e-12)
    assert z_triple(float(t[0]), sh) == pytest.approx(direct[0], abs=1e-12)
    assert sh.T == pytest.approx(1e5)


def test_breakpoints_lie_where_main_sum_length_changes():
    bp = z_breakpoints(1e4, 2e4)
    m = np.sqrt((bp + 1e-9) / (2 * math.pi))
    assert np.allclose(m, np.round(m), atol=1e-9)
    assert np.all((bp >= 1e4) & (bp <= 2e4))


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=20.0, max_value=1e6))
def test_z_is_real_and_bounded_by_crude_growth(t):
    v = z(t).value
    assert math.isfinite(v)
    assert abs(v) < 4 * t ** 0.25 * math.log(t) + 10


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=100.0, max_value=1e6), st.floats(min_value=1e-3, max_value=1.0))
def test_theta1_is_increasing(t, h):
    assert theta1(np.longdouble(t) + np.longdouble(h)) > theta1(np.longdouble(t))


def test_first_zero_is_bracketed():
    assert np.sign(z(14.0).value) != np.sign(z(14.3).value)


def test_theta_corrections_are_the_two_series_terms():
    t = np.longdouble(250.0)
    diff = float(theta_rs(t) - theta1(t))
    assert abs(diff - (1 / (48 * 250.0) + 7 / (5760 * 250.0 ** 3))) < 1e-12


def test_triple_product_against_oracle():
    t = 1e5
    ref = siegelz(t + 0.1) * siegelz(t + 0.2) * siegelz(t + 0.3)
    assert abs(z_triple(t, ShiftTriple.at(t, 0.1, 0.2, 0.3)) - ref) < 1e-5


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=200.0, max_value=1e6), st.permutations([0.0, 0.37, -1.25]))
def test_triple_product_is_permutation_invariant(t, perm):
    base = z_triple(t, ShiftTriple.at(1e4, 0.0, 0.37, -1.25))
    assert z_triple(t, ShiftTriple.at(1e4, *perm)) == base
