import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargedbose import bogolubov as bg
from chargedbose.errors import TruncationUnconverged
from chargedbose.potentials import CutoffPair
from chargedbose.scalars import I0


def P(A, Bp, Bm, kappa=0.0):
    return bg.QuadraticModeParams(A, Bp, Bm, kappa)


def test_bound_examples():
    assert bg.bogolubov_bound(P(1, 0, 0)) == 0.0
    assert bg.bogolubov_bound(P(1e-12, 1, 1)) == pytest.approx(-2.0, abs=1e-5)
    assert bg.bogolubov_bound(P(3, 2, 2)) == pytest.approx(-7 + np.sqrt(33), abs=1e-14)
    assert bg.bogolubov_bound(P(3, 2, 2, 2)) == pytest.approx(-7 + np.sqrt(33) - 4, abs=1e-14)


def test_invalid_params():
    with pytest.raises(ValueError):
        P(0.0, 1, 1)
    with pytest.raises(ValueError):
        P(1.0, -1, 1)
    with pytest.raises(ValueError):
        bg.FockTruncation(2, 3)


def test_truncation_dimension():
    assert bg.FockTruncation(2, 10).dim == 121


def test_kappa_zero_is_tight():
    p = P(3, 2, 2)
    e = bg.exact_ground_energy_canonical(p, bg.FockTruncation(2, 60))
    assert e == pytest.approx(-7 + np.sqrt(33), abs=1e-6)


def test_pair_sector_agrees_with_full_matrix():
    p = P(2.0, 1.0, 0.5)
    full = bg._lowest(bg.canonical_hamiltonian(p, 30))
    assert full == pytest.approx(bg._pair_sector_energy(2.0, 1.5, 30), abs=1e-10)


@pytest.mark.parametrize("kappa", [0.3, 1.0, 2.0, 1.2 - 0.9j])
def test_completed_square(kappa):
    p = P(3.0, 2.5, 1.5, kappa)
    e = bg.exact_ground_energy_canonical(p, bg.FockTruncation(2, 60))
    assert e == pytest.approx(bg.completed_square_energy(p), abs=1e-6)
    assert e >= bg.bogolubov_bound(p) - 1e-8


def test_phase_of_kappa_is_irrelevant():
    a = bg.truncated_ground_energy(P(1.0, 1.0, 1.0, 1.5), 40)
    b = bg.truncated_ground_energy(P(1.0, 1.0, 1.0, 1.5j), 40)
    assert a == pytest.approx(b, abs=1e-12)


def test_unconverged_truncation_raises():
    with pytest.raises(TruncationUnconverged):
        bg.exact_ground_energy_canonical(P(0.01, 5, 5), bg.FockTruncation(2, 8))


def test_random_draws_respect_bound():
    out = bg.random_check(25, np.random.default_rng(11))
    assert all(r.gap >= -1e-8 for r in out)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 10), st.floats(0, 10), st.floats(0, 10), st.floats(0, 3))
def test_bound_below_exact_closed_form(A, Bp, Bm, k):
    p = P(A, Bp, Bm, k)
    assert bg.completed_square_energy(p) >= bg.bogolubov_bound(p) - 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 10), st.floats(0, 10), st.floats(0, 10), st.floats(0, 3))
def test_bound_nonincreasing_in_B(A, B1, B2, k):
    lo, hi = sorted((B1, B2))
    assert bg.bogolubov_bound(P(A, hi, 0, k)) <= bg.bogolubov_bound(P(A, lo, 0, k)) + 1e-12


def test_foldy_density_examples():
    assert bg.foldy_energy_density(1.0, 1.0) == -I0
    assert bg.foldy_energy_density(16.0, 1.3) / bg.foldy_energy_density(1.0, 1.3) == pytest.approx(32.0)


def test_lattice_zeta_against_gaussian_damped_sum():
    # sum' e^{-eps n^2}/n^2 - 2 pi^{3/2}/sqrt(eps) = zeta + eps + O(e^{-pi^2/eps}); the eps
    # comes from the omitted n = 0 term
    r = np.arange(-80, 81)
    n2 = (r[:, None, None] ** 2 + r[None, :, None] ** 2 + r[None, None, :] ** 2).ravel()
    n2 = n2[n2 > 0]
    for eps in (0.02, 0.005):
        val = np.sum(np.exp(-eps * n2) / n2) - 2 * np.pi**1.5 / np.sqrt(eps) - eps
        assert val == pytest.approx(bg.cubic_lattice_zeta(), abs=1e-10)


def test_lattice_sum_with_finite_size_term():
    rho = 1e4
    E = bg.foldy_lattice_sum(rho, 1.0)
    corrected = E - bg.foldy_finite_size_correction(rho, 1.0)
    assert corrected == pytest.approx(bg.foldy_energy_density(rho, 1.0), rel=0.02)


def test_raw_lattice_sum_error_law():
    # relative error -> zeta / (2 pi I0) (rho ell^4)^{-1/4}; the excluded k = 0 cell dominates
    c = bg.cubic_lattice_zeta() / (2 * np.pi * I0)
    for x in (1e4, 1e6):
        rel = bg.foldy_lattice_sum(x, 1.0) / bg.foldy_energy_density(x, 1.0) - 1
        assert rel * x**0.25 == pytest.approx(c, rel=0.02)


def test_raw_lattice_sum_within_two_percent_when_box_is_large():
    x = 1e9
    assert bg.foldy_lattice_sum(x, 1.0) == pytest.approx(bg.foldy_energy_density(x, 1.0), rel=0.02)


def test_hq_density_examples():
    cut = CutoffPair(0.5, 0.5)
    assert bg.hq_scalar_bound(np.array([1.0, 0.0, 0.0]), 10, 2.0, cut, 1.2, 0.3) == 0.0
    cut = CutoffPair(0.1, 4.0)
    k = np.random.default_rng(0).standard_normal((50, 3))
    g = 10 * 4 * np.pi * ((k**2).sum(1) + 1 / 16) ** -1
    val = bg.hq_scalar_bound(k, 10, 2.0, cut, 1.2, 0.3)
    assert np.all(val <= 0)
    assert np.all(val >= -0.5 * g / (2 * np.pi) ** 3)


@pytest.mark.parametrize("nu,ell,gamma", [(1.0, 1.0, 1.0), (50.0, 0.7, 1.3), (3.0, 2.0, 1.5)])
def test_hq_coulomb_limit(nu, ell, gamma):
    expect = -I0 * nu**1.25 * ell**-0.75 * gamma**-0.25
    assert bg.hq_coulomb_integral(nu, ell, gamma) == pytest.approx(expect, rel=1e-8)
