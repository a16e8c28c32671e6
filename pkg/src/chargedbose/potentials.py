"""Yukawa kernels, the smooth bump family, and sliding-decomposition positivity.

The bump profiles are tensor products of a one-dimensional ramp

    s(u) = sin(pi/2 * p(u)),   p(u) = 35u^4 - 84u^5 + 70u^6 - 20u^7,

where ``p`` is the C^3 smoothstep.  Because ``p(u) + p(1-u) = 1`` the ramp
obeys ``s(u)^2 + s(1-u)^2 = 1`` exactly, which makes the squared partition of
unity of ``Theta`` hold by construction.  ``sqrt(1 - s^2) = cos(pi/2 p)`` is as
smooth as ``s`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicSpline

from .errors import InvalidT, NotFound, SingularPoint

FOUR_PI = 4.0 * np.pi

# C^3 smoothstep, ascending coefficients
_SMOOTHSTEP = np.array([0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0])


# ---------------------------------------------------------------------------
# Yukawa and cutoff potentials


def yukawa(x, m: float = 0.0):
    """Y_m(x) = exp(-m|x|)/|x| for points ``x`` of shape (..., 3)."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0.0):
        raise SingularPoint("Yukawa potential is singular at x = 0")
    return np.exp(-m * r) / r


def yukawa_hat(k, m: float = 0.0):
    """Closed-form transform 4 pi / (k^2 + m^2)."""
    k = np.asarray(k, dtype=float)
    return FOUR_PI / (k * k + m * m)


def radial_fourier(rf: Callable, k, r_max: float = np.inf, nodes: int = 4000):
    """Transform of a radial function given through ``rf(r) = r f(r)``.

    Uses f^(k) = (4 pi / k) int_0^inf r f(r) sin(k r) dr.  Finite ``r_max``
    is integrated by composite Gauss-Legendre; ``r_max = inf`` goes through
    QUADPACK's Fourier-weight routine.
    """
    from scipy import integrate

    k = np.atleast_1d(np.asarray(k, dtype=float))
    out = np.empty_like(k)
    if np.isinf(r_max):
        for i, kk in enumerate(k):
            val, _ = integrate.quad(rf, 0.0, np.inf, weight="sin", wvar=kk, limlst=200)
            out[i] = FOUR_PI * val / kk
        return out
    r, w = _composite_gl(0.0, r_max, nodes)
    g = rf(r) * w
    return FOUR_PI * (np.sin(np.outer(k, r)) @ g) / k


@dataclass(frozen=True)
class CutoffPair:
    """Short and long distance cutoffs r <= R of V_{r,R} = Y_{1/R} - Y_{1/r}."""

    r: float
    R: float

    def __post_init__(self):
        if not (self.r > 0 and self.R >= self.r):
            raise ValueError(f"need 0 < r <= R, got r={self.r}, R={self.R}")

    def value(self, x):
        """V_{r,R}(x) for points of shape (..., 3); finite at the origin."""
        rr = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            v = (np.exp(-rr / self.R) - np.exp(-rr / self.r)) / rr
        return np.where(rr == 0.0, self.at_zero, v)

    @property
    def at_zero(self) -> float:
        return 1.0 / self.r - 1.0 / self.R

    @property
    def integral(self) -> float:
        return FOUR_PI * (self.R**2 - self.r**2)


def v_rR_hat(k, cut: CutoffPair):
    """4 pi [ (k^2 + R^-2)^-1 - (k^2 + r^-2)^-1 ], nonnegative, maximal at k = 0."""
    k2 = np.asarray(k, dtype=float) ** 2
    # (r^-2 - R^-2) / ((k^2+R^-2)(k^2+r^-2)) avoids cancellation for r ~ R
    num = cut.r**-2 - cut.R**-2
    return FOUR_PI * num / ((k2 + cut.R**-2) * (k2 + cut.r**-2))


# ---------------------------------------------------------------------------
# bump family


def _ramp_derivs(u):
    """s(u) and its first three derivatives in u (clamped outside [0, 1])."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    p = [P.polyval(u, P.polyder(_SMOOTHSTEP, j)) if j else P.polyval(u, _SMOOTHSTEP) for j in range(4)]
    h = np.pi / 2
    sn, cs = np.sin(h * p[0]), np.cos(h * p[0])
    a1, a2, a3 = h * p[1], h * p[2], h * p[3]
    s0 = sn
    s1 = cs * a1
    s2 = -sn * a1**2 + cs * a2
    s3 = -cs * a1**3 - 3 * sn * a1 * a2 + cs * a3
    return s0, s1, s2, s3


def ramp(u):
    return _ramp_derivs(u)[0]


def _ramp_sup_derivs(n: int = 20001):
    u = np.linspace(0.0, 1.0, n)
    return [float(np.max(np.abs(d))) for d in _ramp_derivs(u)]


def _composite_gl(a: float, b: float, n: int, order: int = 20):
    panels = max(1, n // order)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class BumpFamily:
    """theta, Theta, h = gamma theta*theta and normalizations for one value of t."""

    t: float
    gamma: float
    gamma_tilde: float
    deriv_constant: float
    _h1_spline: CubicSpline = field(repr=False)
    _h1_support: float = field(repr=False)
    _h1_zero: float = field(repr=False)
    _theta_grad_sq: float = field(repr=False)

    # 1d profiles
    def theta_1d(self, x, order: int = 0):
        t = self.t
        x = np.asarray(x, dtype=float)
        u = ((1 - t) / 2 - np.abs(x)) / (t / 2)
        d = _ramp_derivs(u)[order] * (2.0 / t) ** order
        if order % 2:
            d = -np.sign(x) * d
        inside = (u > 0) & (u < 1)
        return d if order == 0 else np.where(inside, d, 0.0)

    def Theta_1d(self, x):
        t = self.t
        u = ((1 + t) / 2 - np.abs(np.asarray(x, dtype=float))) / t
        return ramp(u)

    def theta(self, x):
        x = np.asarray(x, dtype=float)
        return np.prod(self.theta_1d(x), axis=-1)

    def Theta(self, x):
        x = np.asarray(x, dtype=float)
        return np.prod(self.Theta_1d(x), axis=-1)

    def h_1d(self, y):
        y = np.abs(np.asarray(y, dtype=float))
        return np.where(y < self._h1_support, self._h1_spline(np.minimum(y, self._h1_support)), 0.0)

    def h(self, x):
        """gamma (theta * theta)(x); equals 1 at the origin."""
        x = np.asarray(x, dtype=float)
        return self.gamma * np.prod(self.h_1d(x), axis=-1)

    @property
    def h_support_radius(self) -> float:
        return float(np.sqrt(3.0) * self._h1_support)

    @property
    def h_laplacian_at_zero(self) -> float:
        """Delta h(0) = 3 h1''(0)/h1(0) with h1''(0) = -int theta1'^2."""
        return -3.0 * self._theta_grad_sq / self._h1_zero

    @cached_property
    def _h_radial_table(self):
        r = np.linspace(0.0, self.h_support_radius, 1501)
        return CubicSpline(r, self._spherical_average(r))

    def _spherical_average(self, r, n_angle: int = 48):
        # octant symmetry; Gauss-Legendre in cos(polar) and in azimuth
        xc, wc = np.polynomial.legendre.leggauss(n_angle)
        c = 0.5 * (xc + 1.0)
        wc = 0.5 * wc
        xa, wa = np.polynomial.legendre.leggauss(n_angle)
        a = 0.25 * np.pi * (xa + 1.0)
        wa = 0.25 * np.pi * wa
        sn = np.sqrt(1.0 - c**2)
        dirs = np.stack(
            [np.outer(sn, np.cos(a)), np.outer(sn, np.sin(a)), np.outer(c, np.ones_like(a))], axis=-1
        ).reshape(-1, 3)
        wts = np.outer(wc, wa).ravel() / (np.pi / 2)
        out = np.empty(len(r))
        for i, rr in enumerate(r):
            out[i] = np.dot(self.h(rr * dirs), wts)
        return out

    def h_radial(self, r):
        """Spherical average of ``h`` over the sphere of radius ``r``."""
        r = np.asarray(r, dtype=float)
        inside = r < self.h_support_radius
        return np.where(inside, self._h_radial_table(np.minimum(r, self.h_support_radius)), 0.0)


def build_bumps(t: float) -> BumpFamily:
    if not (0.0 < t < 0.5):
        raise InvalidT(f"t must lie in (0, 1/2), got {t}")
    # 1d theta on its support, split at the ramp edges
    a, b = (1 - 2 * t) / 2, (1 - t) / 2
    x, w = np.polynomial.legendre.leggauss(40)

    def seg(lo, hi):
        return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w

    def integral_1d(fn, pts):
        tot = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            if hi > lo:
                xs, ws = seg(lo, hi)
                tot += np.dot(fn(xs), ws)
        return tot

    fam0 = BumpFamily(t, 1.0, 1.0, 0.0, None, 1.0, 1.0, 0.0)
    theta_sq = integral_1d(lambda s: fam0.theta_1d(s) ** 2, [-b, -a, a, b])
    A, B = (1 - t) / 2, (1 + t) / 2
    Theta_4 = integral_1d(lambda s: fam0.Theta_1d(s) ** 4, [-B, -A, A, B])
    grad_sq = integral_1d(lambda s: fam0.theta_1d(s, 1) ** 2, [-b, -a, a, b])

    # h1(y) = int theta1(s) theta1(s - y) ds tabulated on [0, 1 - t]
    support = 1.0 - t
    ys = np.linspace(0.0, support, 2001)
    h1 = np.empty_like(ys)
    for i, y in enumerate(ys):
        pts = sorted({-b, -a, a, b, y - b, y - a, y + a, y + b})
        pts = [p for p in pts if -b <= p <= b]
        h1[i] = integral_1d(lambda s: fam0.theta_1d(s) * fam0.theta_1d(s - y), pts)
    spline = CubicSpline(ys, h1, bc_type=((1, 0.0), (1, 0.0)))

    sup = _ramp_sup_derivs()
    # ||d^alpha theta||_inf <= prod_i sup|s^(alpha_i)| (2/t)^alpha_i ; worst |alpha| <= 3 split
    consts = []
    for alpha in [(1, 0, 0), (2, 0, 0), (1, 1, 0), (3, 0, 0), (2, 1, 0), (1, 1, 1)]:
        consts.append(np.prod([sup[j] * 2.0**j for j in alpha]))
    return BumpFamily(
        t=t,
        gamma=1.0 / theta_sq**3,
        gamma_tilde=1.0 / Theta_4**3,
        deriv_constant=float(max(consts)),
        _h1_spline=spline,
        _h1_support=support,
        _h1_zero=float(h1[0]),
        _theta_grad_sq=float(grad_sq),
    )


def partition_residual(fam: BumpFamily, x) -> np.ndarray:
    """|sum_k Theta(x - k)^2 - 1| at points ``x`` of shape (n, 3)."""
    x = np.asarray(x, dtype=float)
    frac = x - np.round(x)
    shifts = np.array(np.meshgrid([-1, 0, 1], [-1, 0, 1], [-1, 0, 1], indexing="ij")).reshape(3, -1).T
    tot = np.zeros(len(x))
    for s in shifts:
        tot += fam.Theta(frac - s) ** 2
    return np.abs(tot - 1.0)


def derivative_sup(fam: BumpFamily, alpha, n: int = 4001) -> float:
    """Numerical sup norm of d^alpha theta on a tensor grid of 1d sups."""
    xs = np.linspace(-0.5, 0.5, n)
    out = 1.0
    for a in alpha:
        out *= float(np.max(np.abs(fam.theta_1d(xs, a))))
    return out


# ---------------------------------------------------------------------------
# sliding function F = Y_m - h(./lam) Y_{m + omega/lam}


@dataclass(frozen=True)
class SlidingResult:
    t: float
    m: float
    lam: float
    omega: float
    min_transform: float
    k_at_min: float
    f_at_zero: float
    asymptotic_coefficient: float
    tried: tuple


def sliding_transform(fam: BumpFamily, omega: float, k, m: float = 0.0, lam: float = 1.0):
    """F^(k) for F = Y_m - h(x/lam) Y_{m+omega/lam}, h radialized by spherical averaging."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    M = m + omega / lam
    R = lam * fam.h_support_radius
    # part inside supp h: r F(r) = e^{-mr} - h_rad(r/lam) e^{-Mr}
    inner = radial_fourier(lambda r: np.exp(-m * r) - fam.h_radial(r / lam) * np.exp(-M * r), k, r_max=R)
    # outer tail of Y_m beyond R, in closed form (Abel limit at m = 0)
    tail = FOUR_PI / k * np.exp(-m * R) * (m * np.sin(k * R) + k * np.cos(k * R)) / (m * m + k * k)
    return inner + tail


def sliding_value_near_zero(fam: BumpFamily, omega: float, m: float = 0.0, lam: float = 1.0, r: float = 1e-6):
    M = m + omega / lam
    return float((np.exp(-m * r) - fam.h_radial(r / lam) * np.exp(-M * r)) / r)


def default_k_grid(lam: float = 1.0) -> np.ndarray:
    k = np.concatenate([np.geomspace(1e-3, 1.0, 60), np.linspace(1.0, 400.0, 1600)[1:]])
    return k / lam


def omega_search(
    t: float,
    m: float = 0.0,
    lam: float = 1.0,
    fam: BumpFamily | None = None,
    omega0: float = 0.1,
    ratio: float = 1.25,
    n_max: int = 80,
    tol: float = 1e-6,
    k_grid=None,
) -> SlidingResult:
    """Smallest omega on a geometric grid for which F^ >= -tol on the k grid.

    Beyond the last sampled k the transform is governed by
    -4 pi g''(0) / k^4 with g(r) = r F(r); that coefficient must also be
    positive for the returned omega.
    """
    fam = fam if fam is not None else build_bumps(t)
    k = default_k_grid(lam) if k_grid is None else np.asarray(k_grid, dtype=float)
    tried = []
    omega = omega0
    for _ in range(n_max):
        M = m + omega / lam
        # g''(0) = m^2 - M^2 - Delta h(0)/(3 lam^2)
        g2 = m * m - M * M - fam.h_laplacian_at_zero / (3.0 * lam * lam)
        asym = -FOUR_PI * g2
        Fh = sliding_transform(fam, omega, k, m, lam)
        j = int(np.argmin(Fh))
        tried.append((omega, float(Fh[j])))
        if Fh[j] >= -tol and asym > 0:
            return SlidingResult(
                t=t,
                m=m,
                lam=lam,
                omega=omega,
                min_transform=float(Fh[j]),
                k_at_min=float(k[j]),
                f_at_zero=sliding_value_near_zero(fam, omega, m, lam),
                asymptotic_coefficient=float(asym),
                tried=tuple(tried),
            )
        omega *= ratio
    raise NotFound(f"no omega up to {omega:.3g} gives a nonnegative transform (widen the grid)")


def sliding_function(fam: BumpFamily, omega: float, m: float = 0.0, lam: float = 1.0):
    """Callable F(x) for points of shape (..., 3), using the non-radialized h."""
    M = m + omega / lam

    def F(x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        safe = np.where(r == 0, 1.0, r)
        val = (np.exp(-m * safe) - fam.h(x / lam) * np.exp(-M * safe)) / safe
        return np.where(r == 0, omega / lam, val)

    return F


def sliding_fft_check(fam: BumpFamily, omega: float, n: int = 96, box: float = 2.0, m: float = 0.0):
    """Compare the radialized transform with a 3D FFT of the cube-symmetric F.

    The smooth part (h - 1) Y_M is transformed on a periodic grid; the two
    Yukawa pieces are added in closed form.  Returns (min of the 3D transform,
    max absolute deviation from the radialized transform) over |k| below half
    the Nyquist radius.
    """
    M = m + omega
    dx = 2.0 * box / n
    x = (np.arange(n) - n // 2) * dx
    X = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    r = np.linalg.norm(X, axis=-1)
    safe = np.where(r == 0, 1.0, r)
    g = np.where(r == 0, 0.0, (fam.h(X) - 1.0) * np.exp(-M * safe) / safe)
    G = np.real(np.fft.fftn(np.fft.ifftshift(g))) * dx**3
    k1 = 2 * np.pi * np.fft.fftfreq(n, dx)
    K = np.sqrt(sum(a * a for a in np.meshgrid(k1, k1, k1, indexing="ij")))
    mask = (K > 0) & (K < 0.5 * np.max(k1))
    kk = K[mask]
    F3 = yukawa_hat(kk, m) - yukawa_hat(kk, M) - G[mask]
    uk, inv = np.unique(np.round(kk, 10), return_inverse=True)
    Fr = sliding_transform(fam, omega, uk, m)[inv]
    return float(F3.min()), float(np.max(np.abs(F3 - Fr)))


def charge_sum_lower(points, charges, F0: float, F: Callable):
    """Pair sum sum_{i<j} e_i e_j F(x_i - x_j) and the bound -N F0 / 2."""
    x = np.asarray(points, dtype=float)
    e = np.asarray(charges, dtype=float)
    n = len(x)
    iu, ju = np.triu_indices(n, k=1)
    lhs = float(np.sum(e[iu] * e[ju] * F(x[iu] - x[ju]))) if n > 1 else 0.0
    return lhs, -n * F0 / 2.0
