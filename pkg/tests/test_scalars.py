import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargedbose import scalars as sc
from chargedbose.errors import NonConvergence

# 30-digit values from mpmath: the Gamma expression and, independently, the
# conjugate-stable 1D integral both give this number
I0_REF = 0.574447353215854028602386415159
# leading slope dI/da at a = 0, mpmath quadrature of the differentiated radial integrand
SLOPE_REF = 0.073881997924170135939177


def test_closed_form_digits():
    assert sc.i0_closed_form() == pytest.approx(I0_REF, abs=1e-15)


def test_mpmath_oracle_agrees_with_frozen_digits():
    mp.mp.dps = 25
    cf = 2 ** mp.mpf(1.5) * mp.gamma(0.75) / (5 * mp.pi**0.25 * mp.gamma(1.25))
    assert float(cf) == pytest.approx(I0_REF, abs=1e-16)


def test_quad_1d_matches_closed_form():
    assert abs(sc.i0_quad_1d(1e-10) - sc.i0_closed_form()) <= 1e-8


def test_radial_form_matches_closed_form():
    assert abs(sc.i_of_a(0.0) - sc.i0_closed_form()) <= 1e-6


def test_integrand_at_zero_and_tail():
    assert sc.foldy_integrand(0.0) == 1.0
    x = np.array([1e2, 1e3])
    # after multiplying out the conjugate the integrand behaves like 1/(2 x^4)
    assert np.allclose(sc.foldy_integrand(x) * 2 * x**4, 1.0, rtol=1e-4)


def test_naive_and_stable_integrand_agree_where_naive_is_safe():
    x = np.linspace(0, 3, 50)
    naive = 1 + x**4 - x**2 * np.sqrt(x**4 + 2)
    assert np.allclose(sc.foldy_integrand(x), naive, rtol=1e-10, atol=1e-12)


def test_i0_result_fields_agree():
    r = sc.i0_all()
    assert r.closed_form > 0
    assert r.max_pairwise_diff <= r.abs_error_estimate


def test_tiny_tolerance_reports_nonconvergence():
    with pytest.raises(NonConvergence):
        sc.i0_quad_1d(1e-30)


def test_bad_arguments():
    with pytest.raises(ValueError):
        sc.i0_quad_1d(0.0)
    with pytest.raises(ValueError):
        sc.i_of_a(-1.0)


def test_i_of_a_monotone_examples():
    assert sc.i_of_a(1e-2) >= sc.i_of_a(1e-3) >= sc.i_of_a(0.0)


def test_i_of_a_excess_is_linear_in_a():
    for a in (1e-5,):
        assert (sc.i_of_a(a) - sc.I0) / a == pytest.approx(SLOPE_REF, rel=1e-2)


def test_sqrt_a_form_is_an_upper_bound_only():
    # (I - I0)/sqrt(a) shrinks with a: a C sqrt(a) bound holds with any C above the a = 1e-2 value
    r = [(sc.i_of_a(a) - sc.I0) / np.sqrt(a) for a in (1e-2, 1e-3, 1e-4)]
    assert r[0] > r[1] > r[2] > 0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_i_of_a_nondecreasing(a1, a2):
    lo, hi = sorted((a1, a2))
    assert sc.i_of_a(lo) <= sc.i_of_a(hi) + 1e-13


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(0.0, 10.0))
def test_bracket_nonnegative_and_below_g(k, a):
    b = float(sc.bracket_density(k, a))
    assert 0.0 <= b <= 4 * np.pi / k**2 * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
def test_bracket_matches_naive_form_and_increases_in_g(g1, g2, f):
    lo, hi = sorted((g1, g2))
    assert sc.bracket(lo, f) <= sc.bracket(hi, f) * (1 + 1e-12)
    naive = (lo + f) - np.sqrt((lo + f) ** 2 - lo**2)
    assert float(sc.bracket(lo, f)) == pytest.approx(naive, rel=1e-6, abs=1e-9 * (lo + f))
