import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargedbose import potentials as pt
from chargedbose.errors import InvalidT, NotFound, SingularPoint


@pytest.fixture(scope="module")
def fam():
    return pt.build_bumps(0.2)


@pytest.fixture(scope="module")
def sliding(fam):
    return pt.omega_search(0.2, m=0.0, lam=1.0, fam=fam, omega0=0.5)


def test_yukawa_values():
    assert pt.yukawa([1.0, 0.0, 0.0]) == 1.0
    assert pt.yukawa([0.0, 2.0, 0.0], 1.0) == pytest.approx(np.exp(-2) / 2, rel=1e-15)
    with pytest.raises(SingularPoint):
        pt.yukawa(np.zeros(3))


@pytest.mark.parametrize("m", [0.5, 1.0, 3.0])
def test_yukawa_fourier_transform(m):
    k = np.array([0.1, 0.5, 1.0, 2.0, 5.0, 20.0])
    num = pt.radial_fourier(lambda r: np.exp(-m * r), k)
    assert np.allclose(num, pt.yukawa_hat(k, m), rtol=1e-6, atol=0)


def test_finite_range_transform_of_cutoff_pair():
    cut = pt.CutoffPair(0.3, 1.2)
    k = np.array([0.2, 1.0, 4.0, 10.0])
    num = pt.radial_fourier(lambda r: np.exp(-r / cut.R) - np.exp(-r / cut.r), k, r_max=60.0)
    assert np.allclose(num, pt.v_rR_hat(k, cut), rtol=1e-6)


def test_cutoff_pair_examples():
    same = pt.CutoffPair(0.7, 0.7)
    assert np.all(pt.v_rR_hat(np.linspace(0, 10, 11), same) == 0)
    cut = pt.CutoffPair(0.2, 3.0)
    assert pt.v_rR_hat(0.0, cut) == pytest.approx(4 * np.pi * (3.0**2 - 0.2**2), rel=1e-14)
    assert cut.integral == pytest.approx(4 * np.pi * (9 - 0.04))
    assert cut.value(np.zeros(3)) == pytest.approx(cut.at_zero)
    assert cut.value(np.array([1e-7, 0, 0])) == pytest.approx(cut.at_zero, rel=1e-6)
    with pytest.raises(ValueError):
        pt.CutoffPair(1.0, 0.5)


@settings(max_examples=100)
@given(st.floats(1e-3, 10), st.floats(1.0, 100), st.floats(0, 1e3))
def test_v_rR_hat_bounded(r, ratio, k):
    cut = pt.CutoffPair(r, r * ratio)
    v = pt.v_rR_hat(k, cut)
    assert 0 <= v <= 4 * np.pi * cut.R**2 * (1 + 1e-12)
    assert v <= pt.v_rR_hat(0.0, cut) * (1 + 1e-12)


def test_invalid_t():
    for t in (0.0, 0.5, -0.1, 0.7):
        with pytest.raises(InvalidT):
            pt.build_bumps(t)


def test_ramp_complementary():
    u = np.linspace(0, 1, 101)
    assert np.allclose(pt.ramp(u) ** 2 + pt.ramp(1 - u) ** 2, 1.0, atol=1e-15)


def test_bump_shape(fam):
    assert fam.theta(np.zeros(3)) == 1.0
    t = fam.t
    edge = (1 - t) / 2
    assert fam.theta(np.array([edge, 0.0, 0.0])) == 0.0
    assert fam.Theta(np.array([(1 + t) / 2, 0.1, 0.0])) == 0.0
    x = np.random.default_rng(0).uniform(-1, 1, size=(500, 3))
    for f in (fam.theta, fam.Theta):
        v = f(x)
        assert np.all((v >= 0) & (v <= 1))
        assert np.allclose(v, f(-x))
    assert fam.h(np.zeros(3)) == pytest.approx(1.0, rel=1e-12)


def test_partition_of_unity(fam):
    x = np.random.default_rng(1).uniform(-3, 3, size=(1000, 3))
    assert pt.partition_residual(fam, x).max() <= 1e-12


@pytest.mark.parametrize("t", [0.1, 0.2, 0.4])
def test_normalization_brackets(t):
    f = pt.build_bumps(t)
    assert 1.0 <= f.gamma <= (1 - 2 * t) ** -3
    assert (1 + t) ** -3 <= f.gamma_tilde <= (1 - t) ** -3


def test_gamma_normalizes_theta(fam):
    # gamma int theta^2 = 1 checked by a 3D midpoint sum
    n = 120
    x = (np.arange(n) + 0.5) / n - 0.5
    X = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    assert fam.gamma * np.sum(fam.theta(X) ** 2) / n**3 == pytest.approx(1.0, rel=1e-4)


@pytest.mark.parametrize("t", [0.1, 0.2, 0.4])
def test_derivative_bounds(t):
    f = pt.build_bumps(t)
    for alpha in [(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)]:
        assert pt.derivative_sup(f, alpha) <= f.deriv_constant * t ** -sum(alpha) * (1 + 1e-9)


def test_laplacian_at_zero(fam):
    e = 1e-3
    steps = [np.array(v) * e for v in np.eye(3)]
    fd = sum(fam.h(s) + fam.h(-s) - 2 * fam.h(np.zeros(3)) for s in steps) / e**2
    assert fd == pytest.approx(fam.h_laplacian_at_zero, rel=1e-3)


def test_sliding_positive(sliding):
    assert sliding.min_transform >= -1e-6
    assert sliding.asymptotic_coefficient > 0
    # every smaller grid value failed
    assert all(val < -1e-6 for om, val in sliding.tried[:-1]) or len(sliding.tried) == 1


def test_sliding_value_at_origin(fam, sliding):
    # h is flat to second order at the origin, so F(0+) = omega
    assert sliding.f_at_zero == pytest.approx(sliding.omega, rel=1e-4)
    F = pt.sliding_function(fam, sliding.omega)
    assert F(np.array([1e-6, 0, 0])) == pytest.approx(sliding.omega, rel=1e-4)


def test_sliding_not_found(fam):
    with pytest.raises(NotFound):
        pt.omega_search(0.2, fam=fam, omega0=1e-3, n_max=3)


def test_fft_cross_check(fam, sliding):
    lo, dev = pt.sliding_fft_check(fam, sliding.omega, n=64)
    # the cube anisotropy of h stays small against F^ itself
    assert dev <= 5e-3
    assert lo >= -1e-3


def test_charge_sum_bound(fam, sliding):
    F = pt.sliding_function(fam, sliding.omega)
    F0 = sliding.omega
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = rng.uniform(0, 1.5, size=(10, 3))
        e = rng.permutation([1.0] * 5 + [-1.0] * 5)
        lhs, bound = pt.charge_sum_lower(x, e, F0, F)
        assert lhs >= bound
    assert pt.charge_sum_lower(np.zeros((1, 3)), [1.0], F0, F) == (0.0, -F0 / 2)
    lhs, _ = pt.charge_sum_lower(np.array([[0, 0, 0], [0.3, 0, 0]]), [1.0, 1.0], F0, F)
    assert lhs >= -F0
