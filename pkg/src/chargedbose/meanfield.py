"""Minimizer of  1/2 int |grad Phi|^2 - I0 int Phi^{5/2}  subject to  int Phi^2 <= 1.

Two independent routes are provided.  The shooting route solves the
parameter-free radial equation

    -psi'' - (2/r) psi' - psi^{3/2} + psi = 0

by bisection on psi(0) and rescales Phi(x) = b psi(c x).  The flow route runs
a preconditioned projected gradient descent on a 3D finite-difference grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.fft import dstn, idstn
from scipy.interpolate import CubicHermiteSpline

from .errors import BracketNotFound, Diverged, GridTooCoarse
from .scalars import I0

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class RadialProfile:
    """Radial field on a uniform grid plus its tail beyond the last node.

    ``coupling`` is the coefficient of Phi^{3/2} in the Euler-Lagrange
    equation: 1 for the normalized psi, 5 I0 / 2 for the physical Phi.
    Beyond ``r_grid[-1]`` the field continues as v_end (r_end / r) e^{-kappa (r - r_end)}.
    """

    r_grid: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    mu: float
    coupling: float
    mass: float
    kinetic: float
    potential: float
    tail_rate: float
    energy: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "energy", self.kinetic - I0 * self.potential)

    def spline(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.r_grid, self.values, self.slopes)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        re, ve = self.r_grid[-1], self.values[-1]
        inside = r <= re
        rin = np.minimum(r, re)
        tail = ve * re / np.maximum(r, re) * np.exp(-self.tail_rate * (np.maximum(r, re) - re))
        return np.where(inside, self.spline()(rin), tail)


@dataclass(frozen=True)
class GridField3D:
    """Field on the interior nodes of the Dirichlet box [-extent, extent]^3."""

    extent: float
    n: int
    values: np.ndarray
    energy_trace: tuple = ()

    @property
    def h(self) -> float:
        return 2.0 * self.extent / (self.n + 1)

    @property
    def mass(self) -> float:
        return float(self.h**3 * np.sum(self.values**2))


# ---------------------------------------------------------------------------
# radial integrals and residual


def _radial_integrals(r, v, dv, kappa):
    """mass, kinetic and potential on the grid plus the attached exponential tail."""
    vp = np.clip(v, 0.0, None)
    mass = FOUR_PI * integrate.simpson(r * r * v * v, x=r)
    kin = 2.0 * np.pi * integrate.simpson(r * r * dv * dv, x=r)
    pot = FOUR_PI * integrate.simpson(r * r * vp**2.5, x=r)
    re, ve = r[-1], max(v[-1], 0.0)
    if ve > 0:
        # tail v(r) = ve (re/r) e^{-kappa(r - re)}
        mass += FOUR_PI * ve**2 * re**2 / (2.0 * kappa)
        kin += 2.0 * np.pi * ve**2 * re**2 * integrate.quad(
            lambda s: (kappa + 1.0 / s) ** 2 * np.exp(-2.0 * kappa * (s - re)), re, np.inf
        )[0]
        pot += FOUR_PI * ve**2.5 * integrate.quad(
            lambda s: s * s * (re / s) ** 2.5 * np.exp(-2.5 * kappa * (s - re)), re, np.inf
        )[0]
    return float(mass), float(kin), float(pot)


def el_residual(p: RadialProfile) -> float:
    """max |-Delta Phi - coupling Phi^{3/2} + mu Phi| over interior nodes, second-order FD."""
    r, v = p.r_grid, p.values
    if len(r) < 64:
        raise GridTooCoarse(f"need at least 64 nodes, got {len(r)}")
    h = r[1] - r[0]
    ri = r[1:-1]
    lap = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2 + (v[2:] - v[:-2]) / (h * ri)
    res = -lap - p.coupling * np.clip(v[1:-1], 0.0, None) ** 1.5 + p.mu * v[1:-1]
    return float(np.max(np.abs(res)))


# ---------------------------------------------------------------------------
# shooting for the normalized equation


def _rhs(r, y):
    p, dp = y
    return [dp, -2.0 * dp / r + p - max(p, 0.0) ** 1.5]


def _series_start(psi0: float, r0: float):
    c = psi0 - psi0**1.5
    return [psi0 + c * r0 * r0 / 6.0, c * r0 / 3.0]


_R0 = 1e-3
_TOL = dict(method="DOP853", rtol=1e-13, atol=1e-16)


def shoot(psi0: float, r_max: float = 80.0) -> str:
    """'over' if psi crosses zero, 'under' if psi' turns positive first."""

    def crossing(r, y):
        return y[0]

    def turning(r, y):
        return y[1]

    crossing.terminal = True
    crossing.direction = -1
    turning.terminal = True
    turning.direction = 1
    sol = integrate.solve_ivp(_rhs, (_R0, r_max), _series_start(psi0, _R0), events=(crossing, turning), **_TOL)
    if sol.t_events[0].size:
        return "over"
    if sol.t_events[1].size:
        return "under"
    return "under" if sol.y[0, -1] > 0 and sol.y[1, -1] >= 0 else "over"


@lru_cache(maxsize=4)
def critical_psi0(lo: float = 1.5, hi: float = 10.0, rel_tol: float = 4e-16) -> float:
    """Bisect psi(0) between an under-shooting and an over-shooting start.

    psi(0) = 1 is the constant solution, so the bracket starts above it.
    """
    slo, shi = shoot(lo), shoot(hi)
    if slo == shi:
        raise BracketNotFound(f"psi(0) = {lo} and {hi} both give '{slo}'")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rel_tol * mid or mid in (lo, hi):
            break
        if shoot(mid) == slo:
            lo = mid
        else:
            hi = mid
    # the under-shooting side stays positive on the integration range
    return lo if slo == "under" else hi


@lru_cache(maxsize=8)
def solve_normalized(n: int = 16001, r_cut: float = 16.0) -> RadialProfile:
    """Positive decaying solution psi on [0, r_cut] with an e^{-r}/r tail attached.

    The cut sits where psi is about 1e-6 of psi(0): further out the bisected
    trajectory is dominated by the growing mode at double precision.
    """
    psi0 = critical_psi0()
    r = np.linspace(0.0, r_cut, n)
    sol = integrate.solve_ivp(_rhs, (_R0, r_cut), _series_start(psi0, _R0), dense_output=True, **_TOL)
    y = np.empty((2, n))
    small = r < _R0
    y[:, ~small] = sol.sol(r[~small])
    c = psi0 - psi0**1.5
    y[0, small] = psi0 + c * r[small] ** 2 / 6.0
    y[1, small] = c * r[small] / 3.0
    mass, kin, pot = _radial_integrals(r, y[0], y[1], 1.0)
    return RadialProfile(
        r_grid=r, values=y[0], slopes=y[1], mu=1.0, coupling=1.0, mass=mass, kinetic=kin, potential=pot, tail_rate=1.0
    )


def scaling_parameters(psi_mass: float) -> tuple[float, float, float]:
    """(mu, b, c) with Phi = b psi(c x) of unit mass solving the physical equation."""
    mu = (625.0 * I0**4 / (16.0 * psi_mass)) ** 0.4
    return mu, 4.0 * mu * mu / (25.0 * I0 * I0), float(np.sqrt(mu))


def rescale_to_unit_mass(psi: RadialProfile) -> RadialProfile:
    mu, b, c = scaling_parameters(psi.mass)
    return RadialProfile(
        r_grid=psi.r_grid / c,
        values=b * psi.values,
        slopes=b * c * psi.slopes,
        mu=mu,
        coupling=2.5 * I0,
        mass=b * b / c**3 * psi.mass,
        kinetic=b * b / c * psi.kinetic,
        potential=b**2.5 / c**3 * psi.potential,
        tail_rate=c * psi.tail_rate,
    )


def minimizer(n: int = 16001, r_cut: float = 16.0) -> RadialProfile:
    return rescale_to_unit_mass(solve_normalized(n, r_cut))


def dyson_constant(n: int = 16001) -> float:
    A = -minimizer(n).energy
    if not A > 0:
        raise ArithmeticError(f"nonpositive Dyson constant {A}")
    return A


def virial_residual(p: RadialProfile) -> float:
    """(2T - 3/4 I0 P) / T, zero for a stationary point under dilations."""
    return (2.0 * p.kinetic - 0.75 * I0 * p.potential) / p.kinetic


# ---------------------------------------------------------------------------
# functional of scaled copies, by adaptive quadrature on the Hermite interpolant


def scaled_functional(p: RadialProfile, amp: float, scale: float) -> tuple[float, float, float]:
    """(1/2 int |grad u|^2, int u^{5/2}, int u^2) for u(x) = amp Phi(scale x)."""
    sp = p.spline()
    dsp = sp.derivative()
    knots = p.r_grid[:: max(1, (len(p.r_grid) - 1) // 64)]
    re, ve, kap = p.r_grid[-1], p.values[-1], p.tail_rate

    def piecewise(fn_in, fn_tail):
        tot = 0.0
        for a, b in zip(knots[:-1], knots[1:]):
            tot += integrate.quad(fn_in, a, b, epsabs=1e-15, epsrel=1e-11, limit=200)[0]
        tot += integrate.quad(fn_tail, re, np.inf, epsabs=0.0, epsrel=1e-10)[0]
        return tot

    def tail(s):
        return ve * re / s * np.exp(-kap * (s - re))

    def dtail(s):
        return -tail(s) * (kap + 1.0 / s)

    # substitute s = scale r: every integral picks up scale^{-3}, gradients scale^2
    grad = piecewise(lambda s: s * s * dsp(s) ** 2, lambda s: s * s * dtail(s) ** 2)
    pot = piecewise(lambda s: s * s * max(sp(s), 0.0) ** 2.5, lambda s: s * s * tail(s) ** 2.5)
    mass = piecewise(lambda s: s * s * sp(s) ** 2, lambda s: s * s * tail(s) ** 2)
    T = 0.5 * FOUR_PI * amp**2 * scale**2 * grad / scale**3
    return T, FOUR_PI * amp**2.5 * pot / scale**3, FOUR_PI * amp**2 * mass / scale**3


def dilation_energy(p: RadialProfile, lam: float) -> float:
    """E[lam^{3/2} Phi(lam x)], a mass-preserving dilation."""
    T, P, _ = scaled_functional(p, lam**1.5, lam)
    return T - I0 * P


def dyson_energy(N: int) -> float:
    if N < 1:
        raise ValueError("N must be a positive integer")
    return -dyson_constant() * N**1.4


def density_functional_check(N: int, p: RadialProfile | None = None) -> tuple[float, float]:
    """Quadrature value of 1/2 int |grad sqrt rho|^2 - I0 int rho^{5/4} on
    rho = N^{8/5} Phi(N^{1/5} x)^2, alongside -A N^{7/5}."""
    p = p if p is not None else minimizer()
    T, P, _ = scaled_functional(p, N**0.8, N**0.2)
    return T - I0 * P, p.energy * N**1.4


def gaussian_profile(width: float = 1.0, n: int = 4001, r_max: float = 12.0) -> RadialProfile:
    """Unit-mass Gaussian pi^{-3/4} w^{-3/2} e^{-r^2/(2 w^2)} as a profile (mu unused)."""
    r = np.linspace(0.0, r_max * width, n)
    amp = np.pi**-0.75 * width**-1.5
    v = amp * np.exp(-0.5 * (r / width) ** 2)
    dv = -r / width**2 * v
    mass, kin, pot = _radial_integrals(r, v, dv, 1.0)
    return RadialProfile(r, v, dv, 0.0, 2.5 * I0, mass, kin, pot, tail_rate=1.0)


# ---------------------------------------------------------------------------
# 3D gradient flow


def _laplacian(u, h):
    p = np.pad(u, 1)
    return (
        p[2:, 1:-1, 1:-1]
        + p[:-2, 1:-1, 1:-1]
        + p[1:-1, 2:, 1:-1]
        + p[1:-1, :-2, 1:-1]
        + p[1:-1, 1:-1, 2:]
        + p[1:-1, 1:-1, :-2]
        - 6.0 * u
    ) / (h * h)


def grid_energy(f: GridField3D) -> float:
    """Discrete 1/2 int |grad u|^2 - I0 int u^{5/2} with zero Dirichlet data."""
    h, u = f.h, f.values
    p = np.pad(u, 1)
    T = 0.5 * h * sum(float(np.sum(np.diff(p, axis=ax) ** 2)) for ax in range(3))
    P = h**3 * float(np.sum(np.clip(u, 0.0, None) ** 2.5))
    return T - I0 * P


def gaussian_field(n: int, extent: float, width: float = 3.0) -> GridField3D:
    h = 2.0 * extent / (n + 1)
    x = -extent + h * np.arange(1, n + 1)
    r2 = x[:, None, None] ** 2 + x[None, :, None] ** 2 + x[None, None, :] ** 2
    u = np.exp(-r2 / (2.0 * width**2))
    u /= np.sqrt(h**3 * np.sum(u * u))
    return GridField3D(extent, n, u)


def gradient_flow_minimize(
    f: GridField3D, steps: int = 2000, dt: float = 1.0, sigma: float = 0.15, tol: float = 1e-13
) -> GridField3D:
    """Projected gradient descent with an exact (sigma - Delta_h)^{-1} preconditioner.

    The preconditioned gradient is projected onto the tangent of the mass
    sphere, the step is clamped to u >= 0 and renormalized to mass 1.  Steps
    that raise the energy are rejected and ``dt`` is halved.
    """
    n, h = f.n, f.h
    k = np.arange(1, n + 1)
    lam1 = (4.0 / h**2) * np.sin(np.pi * k / (2 * (n + 1))) ** 2
    lam = sigma + lam1[:, None, None] + lam1[None, :, None] + lam1[None, None, :]

    def precond(v):
        return idstn(dstn(v, type=1) / lam, type=1)

    u = np.clip(f.values, 0.0, None)
    u = u / np.sqrt(h**3 * np.sum(u * u))
    E = grid_energy(replace(f, values=u))
    trace = [E]
    rejected = 0
    for _ in range(steps):
        g = -_laplacian(u, h) - 2.5 * I0 * u**1.5
        pg, pu = precond(g), precond(u)
        d = pg - (np.vdot(u, pg) / np.vdot(u, pu)) * pu
        un = np.clip(u - dt * d, 0.0, None)
        un /= np.sqrt(h**3 * np.sum(un * un))
        En = grid_energy(replace(f, values=un))
        if En > E:
            rejected += 1
            if rejected >= 50:
                raise Diverged("energy rose on 50 consecutive trial steps")
            dt *= 0.5
            continue
        rejected = 0
        done = abs(E - En) < tol * abs(E)
        u, E = un, En
        trace.append(E)
        if done:
            break
    return GridField3D(f.extent, n, u, tuple(trace))


def flow_dyson_constant(ns=(63, 95), extent: float = 21.0) -> tuple[float, list[float]]:
    """Richardson extrapolation in h^2 of the flow energies on two grids."""
    hs, Es = [], []
    for n in ns:
        out = gradient_flow_minimize(gaussian_field(n, extent))
        hs.append(out.h)
        Es.append(out.energy_trace[-1])
    (h1, h2), (E1, E2) = hs[-2:], Es[-2:]
    Er = (E2 * h1**2 - E1 * h2**2) / (h1**2 - h2**2)
    return -Er, [-e for e in Es]
