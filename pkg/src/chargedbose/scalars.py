"""The Foldy constant I0 and the cutoff-perturbed integral I(a)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import NonConvergence

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class I0Result:
    closed_form: float
    quad_1d: float
    quad_radial: float
    abs_error_estimate: float

    @property
    def max_pairwise_diff(self) -> float:
        v = (self.closed_form, self.quad_1d, self.quad_radial)
        return max(abs(a - b) for a in v for b in v)


@dataclass(frozen=True)
class IofA:
    a: float
    value: float


def i0_closed_form() -> float:
    """2^{3/2} Gamma(3/4) / (5 pi^{1/4} Gamma(5/4))."""
    return float(2.0**1.5 * special.gamma(0.75) / (5.0 * np.pi**0.25 * special.gamma(1.25)))


def foldy_integrand(x):
    """1 + x^4 - x^2 sqrt(x^4 + 2), written without the cancellation.

    Multiplying by the conjugate gives 1 / (1 + x^4 + x^2 sqrt(x^4 + 2)),
    which tends to 1/(2 x^4) at infinity.
    """
    x = np.asarray(x, dtype=float)
    x2 = x * x
    return 1.0 / (1.0 + x2 * x2 + x2 * np.sqrt(x2 * x2 + 2.0))


def _half_line(fn, tol: float) -> tuple[float, float]:
    # x = u/(1-u) sends [0, inf) to [0, 1); dx = du/(1-u)^2
    def mapped(u):
        if u >= 1.0:
            return 0.0
        w = 1.0 - u
        return fn(u / w) / (w * w)

    with warnings.catch_warnings():
        # a stalled estimate is reported through NonConvergence instead
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(mapped, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=500)
    if not err <= tol:
        raise NonConvergence(f"quadrature error estimate {err:.3g} above tolerance {tol:.3g}")
    return float(val), float(err)


def i0_quad_1d(tol: float = 1e-10) -> float:
    return i0_quad_1d_with_error(tol)[0]


def i0_quad_1d_with_error(tol: float = 1e-10) -> tuple[float, float]:
    if tol <= 0:
        raise ValueError("tol must be positive")
    pref = (2.0 / np.pi) ** 0.75
    val, err = _half_line(lambda x: float(foldy_integrand(x)), tol / pref)
    return pref * val, pref * err


def bracket(g, f):
    """(g + f) - sqrt((g + f)^2 - g^2) for g, f >= 0, as g^2 / (g + f + sqrt(f^2 + 2 g f))."""
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    den = g + f + np.sqrt(f * f + 2.0 * g * f)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, g * g / np.where(den > 0, den, 1.0), 0.0)


def bracket_density(k, a: float = 0.0):
    """(g + f) - sqrt((g + f)^2 - g^2) with g = 4 pi/k^2 and f = k^4/(2(k^2 + a)).

    Evaluated as g^2 / (g + f + sqrt(f^2 + 2 g f)), which is nonnegative and
    free of cancellation.
    """
    k = np.asarray(k, dtype=float)
    return bracket(FOUR_PI / (k * k), 0.5 * k**4 / (k * k + a))


def _radial_integrand(k, a):
    # 1/2 (2 pi)^{-3} 4 pi k^2 * bracket, with k^2 cleared from numerator and denominator
    q = 0.5 * k**6 / (k * k + a)
    return 4.0 / (FOUR_PI + q + np.sqrt(q * q + 2.0 * FOUR_PI * q))


def i_of_a(a: float, tol: float = 1e-12) -> float:
    """1/2 (2 pi)^{-3} int over R^3 of the bracket, reduced to a radial integral."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    val, _ = _half_line(lambda k: _radial_integrand(k, a), tol)
    return val


def i_of_a_result(a: float, tol: float = 1e-12) -> IofA:
    return IofA(a=float(a), value=i_of_a(a, tol))


def i0_all(tol: float = 1e-10) -> I0Result:
    cf = i0_closed_form()
    q1, e1 = i0_quad_1d_with_error(tol)
    qr = i_of_a(0.0)
    return I0Result(closed_form=cf, quad_1d=q1, quad_radial=qr, abs_error_estimate=max(e1, 1e-12, tol))


I0 = i0_closed_form()
