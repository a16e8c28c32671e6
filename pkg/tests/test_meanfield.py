import numpy as np
import pytest

from chargedbose import meanfield as mf
from chargedbose.errors import GridTooCoarse
from chargedbose.scalars import I0

A_REF = 0.050341175674


@pytest.fixture(scope="module")
def psi():
    return mf.solve_normalized()


@pytest.fixture(scope="module")
def phi():
    return mf.minimizer()


def test_bracket_endpoints_shoot_opposite_ways():
    assert mf.shoot(1.5) == "under"
    assert mf.shoot(10.0) == "over"


def test_normalized_solution_residual(psi):
    assert mf.el_residual(psi) <= 1e-6 * psi.values.max()


def test_normalized_solution_positive_and_decreasing(psi):
    assert np.all(psi.values > 0)
    assert np.all(np.diff(psi.values) < 0)


def test_tail_matches_decay_rate(psi):
    # psi ~ C e^{-r}/r at large r
    r, v = psi.r_grid, psi.values
    i, j = np.searchsorted(r, [12.0, 15.0])
    rate = -np.log((v[j] * r[j]) / (v[i] * r[i])) / (r[j] - r[i])
    assert rate == pytest.approx(1.0, rel=2e-3)


def test_unit_mass_and_positive_mu(phi):
    assert phi.mass == pytest.approx(1.0, abs=1e-8)
    assert phi.mu > 0


def test_physical_residual(phi):
    assert mf.el_residual(phi) <= 1e-6 * phi.values.max()


def test_residual_sees_perturbed_mu(phi):
    from dataclasses import replace

    bumped = replace(phi, mu=phi.mu + 0.1)
    assert mf.el_residual(bumped) >= 0.09 * phi.values.max()


def test_zero_field_has_zero_residual(phi):
    from dataclasses import replace

    zero = replace(phi, values=np.zeros_like(phi.values))
    assert mf.el_residual(zero) == 0.0


def test_too_few_nodes():
    g = mf.gaussian_profile(n=33)
    with pytest.raises(GridTooCoarse):
        mf.el_residual(g)


def test_dyson_constant(phi):
    assert -phi.energy == pytest.approx(A_REF, rel=1e-9)
    assert phi.energy == phi.kinetic - I0 * phi.potential


def test_virial_identities(phi):
    assert abs(mf.virial_residual(phi)) <= 1e-4
    assert phi.energy == pytest.approx(-5.0 / 3.0 * phi.kinetic, rel=1e-4)


def test_dilation_has_minimum_at_one(phi):
    e = [mf.dilation_energy(phi, lam) for lam in (1 - 1e-3, 1.0, 1 + 1e-3)]
    assert e[1] < e[0] and e[1] < e[2]
    assert e[1] == pytest.approx(phi.energy, rel=1e-9)


def test_constraint_saturates(phi):
    # E[c Phi] = c^2 T - c^{5/2} I0 P has negative slope at c = 1
    assert 2 * phi.kinetic - 2.5 * I0 * phi.potential < 0


def test_grid_refinement(phi):
    coarse = mf.minimizer(8001)
    assert abs(coarse.energy - phi.energy) <= 1e-4 * abs(phi.energy)


def test_gaussian_oracle():
    g = mf.gaussian_profile()
    assert g.mass == pytest.approx(1.0, abs=1e-10)
    assert g.kinetic == pytest.approx(0.75, abs=1e-6)
    assert g.potential == pytest.approx(np.pi ** (-15 / 8) * (4 * np.pi / 5) ** 1.5, abs=1e-6)
    T, P, M = mf.scaled_functional(g, 1.0, 1.0)
    assert (T, P, M) == pytest.approx((0.75, g.potential, 1.0), rel=1e-6)


def test_scaling_identity(phi):
    for N in (1, 8, 32):
        quad, scaled = mf.density_functional_check(N, phi)
        assert quad == pytest.approx(scaled, rel=1e-6)


def test_dyson_energy_power_law():
    assert mf.dyson_energy(1) == pytest.approx(-mf.dyson_constant())
    assert mf.dyson_energy(64) / mf.dyson_energy(32) == pytest.approx(2**1.4, rel=1e-14)


def test_flow_energy_decreases_and_keeps_mass():
    f = mf.gradient_flow_minimize(mf.gaussian_field(31, 21.0), steps=100)
    tr = np.array(f.energy_trace)
    assert np.all(np.diff(tr) <= 0)
    assert tr[1] < tr[0]
    assert f.mass == pytest.approx(1.0, abs=1e-9)
    assert np.all(f.values >= 0)


def test_flow_agrees_with_shooting(phi):
    A_flow, _ = mf.flow_dyson_constant((47, 63))
    assert A_flow == pytest.approx(-phi.energy, rel=1e-3)


def test_grid_energy_translation_invariant():
    rng = np.random.default_rng(0)
    u = np.zeros((24, 24, 24))
    u[6:14, 5:13, 7:15] = rng.random((8, 8, 8))
    f = mf.GridField3D(10.0, 24, u)
    shifted = mf.GridField3D(10.0, 24, np.roll(u, (3, -2, 4), axis=(0, 1, 2)))
    # same terms, summed in a different order
    assert mf.grid_energy(shifted) == pytest.approx(mf.grid_energy(f), rel=1e-13)
