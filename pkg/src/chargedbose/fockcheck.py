"""Finite checks on kinetic-energy ingredients: Neumann modes, the 20-vector
stencil identity, a two-mode creation-operator inequality and the f_s
convolution estimate."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal
from scipy.sparse import diags, identity, kron

from .errors import NonConvergence
from .lattice import twenty_vector_weights

# ---------------------------------------------------------------------------
# Neumann eigenfunctions of the cube [-ell/2, ell/2]^3


@dataclass(frozen=True)
class NeumannMode:
    n: tuple
    ell: float

    @property
    def p(self) -> np.ndarray:
        return np.pi * np.asarray(self.n, dtype=float) / self.ell

    @property
    def c_p(self) -> float:
        return float(np.sqrt(2.0) ** sum(1 for k in self.n if k > 0))

    @property
    def eigenvalue(self) -> float:
        return float(self.p @ self.p)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.c_p * self.ell**-1.5 * np.prod(np.cos(self.p * (x + self.ell / 2)), axis=-1)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        arg = self.p * (x + self.ell / 2)
        c, s = np.cos(arg), np.sin(arg)
        out = np.empty_like(x)
        for j in range(3):
            f = -self.p[j] * s[..., j]
            for i in range(3):
                if i != j:
                    f = f * c[..., i]
            out[..., j] = f
        return self.c_p * self.ell**-1.5 * out


def _cube_rule(ell: float, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * ell * x
    w = 0.5 * ell * w
    pts = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    return pts, np.einsum("i,j,k->ijk", w, w, w).ravel()


@dataclass(frozen=True)
class NeumannCheck:
    mode: NeumannMode
    norm: float
    rayleigh: float


def neumann_mode_check(n, ell: float, order: int = 24) -> NeumannCheck:
    mode = NeumannMode(tuple(int(k) for k in n), float(ell))
    if any(k < 0 for k in mode.n):
        raise ValueError("mode indices must be nonnegative")
    pts, w = _cube_rule(ell, order)
    norm = float(w @ mode(pts) ** 2)
    grad = mode.gradient(pts)
    rq = float(w @ np.sum(grad * grad, axis=-1)) / norm
    return NeumannCheck(mode, norm, rq)


def neumann_gram(modes, ell: float, order: int = 24) -> np.ndarray:
    pts, w = _cube_rule(ell, order)
    U = np.array([NeumannMode(tuple(m), ell)(pts) for m in modes])
    return (U * w) @ U.T


# ---------------------------------------------------------------------------
# 20-vector identity


def beta_vector_identity(v) -> tuple[float, float]:
    """(sum_sigma w_sigma (v . sigma)^2, |v|^2), evaluated in exact rationals."""
    vq = [Fraction(float(c)) for c in v]
    vecs, wts = twenty_vector_weights()
    lhs = sum(w * sum(a * b for a, b in zip(vq, s)) ** 2 for s, w in zip(vecs, wts))
    rhs = sum(a * a for a in vq)
    return float(lhs), float(rhs)


def beta_vector_identity_exact(v) -> bool:
    vq = [Fraction(float(c)) for c in v]
    vecs, wts = twenty_vector_weights()
    lhs = sum(w * sum(a * b for a, b in zip(vq, s)) ** 2 for s, w in zip(vecs, wts))
    return lhs == sum(a * a for a in vq)


# ---------------------------------------------------------------------------
# (a2* - a1*)(a2 - a1) - (sqrt(n2 + 1/2) - sqrt(n1 + 1/2))^2 + 1 >= 0


def creation_difference_matrix(cutoff: int):
    """Sparse operator on the (cutoff + 1)^2 two-mode basis, index n1 (cutoff + 1) + n2."""
    if cutoff < 4:
        raise ValueError("cutoff must be at least 4")
    c = cutoff + 1
    a = diags(np.sqrt(np.arange(1, c, dtype=float)), 1, shape=(c, c), format="csr")
    one = identity(c, format="csr")
    a1, a2 = kron(a, one, format="csr"), kron(one, a, format="csr")
    hop = (a2 - a1).T @ (a2 - a1)
    n = np.arange(c, dtype=float)
    n1, n2 = np.repeat(n, c), np.tile(n, c)
    root = (np.sqrt(n2 + 0.5) - np.sqrt(n1 + 0.5)) ** 2
    return (hop + diags(1.0 - root)).tocsr()


def creation_difference_gap(cutoff: int) -> float:
    """Smallest eigenvalue over total occupations N <= cutoff / 2.

    The operator conserves N = n1 + n2, and each such sector lies entirely
    inside the truncated space, so the restricted blocks are exact.
    """
    M = creation_difference_matrix(cutoff)
    c = cutoff + 1
    n1, n2 = np.divmod(np.arange(c * c), c)
    best = np.inf
    for N in range(cutoff // 2 + 1):
        idx = np.flatnonzero(n1 + n2 == N)
        block = M[idx][:, idx].toarray()
        best = min(best, float(np.linalg.eigvalsh(block)[0]))
    return best


def creation_difference_sector_min(N: int) -> float:
    """Lowest eigenvalue in the sector n1 + n2 = N from its tridiagonal form."""
    n1 = np.arange(N + 1, dtype=float)
    n2 = N - n1
    diag = N + 1.0 - (np.sqrt(n2 + 0.5) - np.sqrt(n1 + 0.5)) ** 2
    off = -np.sqrt(n1[1:] * (n2[1:] + 1.0))
    if N == 0:
        return float(diag[0])
    return float(eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, 0))[0])


# ---------------------------------------------------------------------------
# f_s(p) - (2 pi)^{-3} (f_s * |X^|^2)(p),  f_s(p) = p^2 / (p^2 + s^{-2})
#
# |X^|^2 is the transform of the tent product g(x) = prod (1 - |x_i|)_+, so
# the difference is -(s^-2 / 4 pi) int Y_{1/s}(x) (1 - g(x)) e^{-ipx} dx.
# Writing 1/(q^2 + m^2) = int_0^inf e^{-u (q^2 + m^2)} du makes the q-integral
# separable into one-dimensional factors G(u, p_i).

_GL200 = np.polynomial.legendre.leggauss(200)


def _tent_heat(u: float, p: float) -> float:
    """G(u, p) = int (1 - |x|)_+ (4 pi u)^{-1/2} e^{-x^2/4u} cos(p x) dx."""
    su = np.sqrt(u)
    Y = min(0.5 / su, 8.0)
    x, w = _GL200
    y = 0.5 * Y * (x + 1.0)
    w = 0.5 * Y * w
    return float(2.0 / np.sqrt(np.pi) * np.sum(w * (1.0 - 2.0 * su * y) * np.exp(-y * y) * np.cos(2.0 * p * su * y)))


def fs_difference(s: float, p, tol: float = 1e-11) -> float:
    """f_s(p) - (2 pi)^{-3} (f_s * |X^|^2)(p) via the separable Schwinger form."""
    if not 0 < s < 1:
        raise ValueError("need 0 < s < 1")
    p = np.asarray(p, dtype=float)
    m2 = s**-2

    def integrand(v):
        # u = s^2 v removes the m^2 prefactor
        u = s * s * v
        return np.exp(-v) * _tent_heat(u, p[0]) * _tent_heat(u, p[1]) * _tent_heat(u, p[2])

    val, err = integrate.quad(integrand, 0.0, np.inf, epsabs=tol, epsrel=tol, limit=400)
    if err > 1e3 * tol:
        raise NonConvergence(f"Schwinger integral error {err:.3g}")
    return -m2 / (p @ p + m2) + val


def default_p_grid(s: float) -> np.ndarray:
    radii = np.concatenate([[0.0], np.geomspace(0.05, 20.0 / s, 24)])
    dirs = np.array([[1, 0, 0], [1, 1, 0], [1, 1, 1]], dtype=float)
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    return np.array([r * d for r in radii for d in dirs])


def fs_convolution_sup(s: float, p_grid=None) -> float:
    grid = default_p_grid(s) if p_grid is None else np.asarray(p_grid, dtype=float)
    return max(abs(fs_difference(s, p)) for p in grid)


def fs_difference_at_zero_realspace(s: float, order: int = 48) -> float:
    """-(m^2 / 4 pi) int Y_m (1 - g) at p = 0, using int Y_m = 4 pi / m^2.

    The cube integral of Y_m g is split into 24 congruent pyramids
    x = t (a, b, 1), a, b, t in [0, 1], on which the integrand is smooth.
    """
    m = 1.0 / s
    x, w = np.polynomial.legendre.leggauss(order)
    ab = 0.5 * (x + 1.0)
    wab = 0.5 * w
    a, b = np.meshgrid(ab, ab, indexing="ij")
    wa = np.outer(wab, wab)
    rho = np.sqrt(a * a + b * b + 1.0)
    # t nodes clustered where e^{-m t rho} varies
    edges = np.unique(np.clip([0.0, 2.0 / m, 8.0 / m, 30.0 / m, 1.0], 0.0, 1.0))
    tot = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = 0.5 * (hi - lo) * (x + 1.0) + lo
        wt = 0.5 * (hi - lo) * w
        T = t[:, None, None]
        f = T * np.exp(-m * T * rho) * (1 - T * a) * (1 - T * b) * (1 - T) / rho
        tot += float(np.einsum("k,kij,ij->", wt, f, wa))
    return -(1.0 - m * m / (4.0 * np.pi) * 24.0 * tot)


def fs_difference_at_zero_grid(s: float, q_max: float = 40.0, h: float = 0.25) -> tuple[float, float]:
    """Trapezoid sum of the q-space convolution on [-q_max, q_max]^3 and a bound on the cut tail.

    Outside the box some |q_i| > q_max, so the omitted part is at most
    m^2 / (q_max^2 + m^2) * 3 (2 pi)^{-1} int_{|q| > q_max} (2 sin(q/2)/q)^2 dq
    <= 12 m^2 / (pi q_max (q_max^2 + m^2)).
    """
    m2 = s**-2
    q = np.arange(-q_max, q_max + h / 2, h)
    x1 = np.where(q == 0, 1.0, (2.0 * np.sin(q / 2) / np.where(q == 0, 1.0, q)) ** 2)
    wq = np.full(q.shape, h)
    wq[[0, -1]] *= 0.5
    f1 = x1 * wq
    q2 = q * q
    tot = 0.0
    for i in range(len(q)):
        tot += f1[i] * float(f1 @ (1.0 / (q2[i] + q2[:, None] + q2[None, :] + m2)) @ f1)
    val = -1.0 + m2 * tot / (2.0 * np.pi) ** 3
    tail = 12.0 * m2 / (np.pi * q_max * (q_max**2 + m2))
    return val, tail


def fs_scaling_fit(s_values=(0.1, 0.04, 0.01)) -> tuple[float, np.ndarray]:
    """Geometric-mean constant C for sup/sqrt(s) and the individual ratios."""
    r = np.array([fs_convolution_sup(s) / np.sqrt(s) for s in s_values])
    return float(np.exp(np.mean(np.log(r)))), r


def twenty_vectors():
    vecs, wts = twenty_vector_weights()
    return list(zip(vecs, wts))


def mode_set(kmax: int = 2):
    return list(itertools.product(range(kmax + 1), repeat=3))
