"""Quadratic boson Hamiltonians: the analytic lower bound and exact truncated-Fock oracles.

The oracle Hamiltonian acts on two modes d+, d-:

    A (n+ + n-) + B (n+ + n- + d+* d-* + d+ d-) + kappa sqrt(B) (d+* + d-) + h.c.

with B = B_plus + B_minus.  Its ground energy in the untruncated space is

    -(A + B) + sqrt((A + B)^2 - B^2) - 2 |kappa|^2 B / (A + 2B).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special
from scipy.linalg import eigh_tridiagonal
from scipy.sparse import diags, identity, kron
from scipy.sparse.linalg import eigsh

from .errors import TruncationUnconverged
from .potentials import CutoffPair, v_rR_hat
from .scalars import I0, bracket

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class QuadraticModeParams:
    A: float
    B_plus: float
    B_minus: float
    kappa: complex = 0.0

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError(f"A must be positive, got {self.A}")
        if self.B_plus < 0 or self.B_minus < 0:
            raise ValueError("B_plus and B_minus must be nonnegative")

    @property
    def B(self) -> float:
        return self.B_plus + self.B_minus


@dataclass(frozen=True)
class FockTruncation:
    modes: int
    cutoff: int

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ValueError("only one or two modes are supported")
        if self.cutoff < 4:
            raise ValueError("cutoff must be at least 4")

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.modes


def _squeeze_energy(A: float, B: float) -> float:
    # -(A+B) + sqrt((A+B)^2 - B^2) = -B^2 / ((A+B) + sqrt(A (A + 2B)))
    return -B * B / ((A + B) + np.sqrt(A * (A + 2.0 * B)))


def bogolubov_bound(p: QuadraticModeParams) -> float:
    return _squeeze_energy(p.A, p.B) - abs(p.kappa) ** 2


def completed_square_energy(p: QuadraticModeParams) -> float:
    """Closed-form ground energy of the canonical two-mode oracle Hamiltonian."""
    B = p.B
    return _squeeze_energy(p.A, B) - 2.0 * abs(p.kappa) ** 2 * B / (p.A + 2.0 * B)


def _annihilation(c: int):
    return diags(np.sqrt(np.arange(1, c + 1, dtype=float)), 1, shape=(c + 1, c + 1), format="csr")


def canonical_hamiltonian(p: QuadraticModeParams, cutoff: int):
    """Sparse matrix of the oracle on the (cutoff+1)^2 two-mode basis, kappa rotated real."""
    # d+ -> e^{i phi} d+, d- -> e^{-i phi} d- leaves the pair term fixed and makes kappa real
    kap = abs(p.kappa)
    B = p.B
    a = _annihilation(cutoff)
    one = identity(cutoff + 1, format="csr")
    dp, dm = kron(a, one, format="csr"), kron(one, a, format="csr")
    num = dp.T @ dp + dm.T @ dm
    pair = dp.T @ dm.T
    lin = dp.T + dm
    H = (p.A + B) * num + B * (pair + pair.T) + kap * np.sqrt(B) * (lin + lin.T)
    return H.tocsr()


def _pair_sector_energy(A: float, B: float, cutoff: int) -> float:
    # kappa = 0 ground state lives on |n, n>; d+* d-* |n,n> = (n+1) |n+1,n+1>
    n = np.arange(cutoff + 1, dtype=float)
    diag = 2.0 * (A + B) * n
    off = B * (n[:-1] + 1.0)
    return float(eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, 0))[0])


def _lowest(H) -> float:
    if H.shape[0] <= 1500:
        return float(np.linalg.eigvalsh(H.toarray())[0])
    v0 = np.zeros(H.shape[0])
    v0[0] = 1.0
    return float(eigsh(H, k=1, which="SA", v0=v0, tol=1e-13)[0][0])


def truncated_ground_energy(p: QuadraticModeParams, cutoff: int) -> float:
    """Lowest eigenvalue on the truncated space; never below the true ground energy."""
    if p.kappa == 0:
        return _pair_sector_energy(p.A, p.B, cutoff)
    return _lowest(canonical_hamiltonian(p, cutoff))


def exact_ground_energy_canonical(p: QuadraticModeParams, t: FockTruncation, tol: float = 1e-8) -> float:
    if t.modes != 2:
        raise ValueError("the oracle needs the two-mode truncation")
    e1 = truncated_ground_energy(p, t.cutoff)
    e2 = truncated_ground_energy(p, 2 * t.cutoff)
    if abs(e1 - e2) > tol:
        raise TruncationUnconverged(f"cutoff {t.cutoff} -> {2 * t.cutoff} moved the energy by {abs(e1 - e2):.3g}")
    return e2


def mean_occupation(p: QuadraticModeParams) -> float:
    """Per-mode occupation of the exact ground state: sinh^2 of the squeeze plus the displacement."""
    A, B = p.A, p.B
    w = np.sqrt(A * (A + 2.0 * B))
    sinh2 = 0.5 * ((A + B) / w - 1.0)
    shift = abs(p.kappa) ** 2 * B / (A + 2.0 * B) ** 2
    return float(sinh2 + shift)


@dataclass(frozen=True)
class DrawResult:
    params: QuadraticModeParams
    bound: float
    exact: float
    converged: bool

    @property
    def gap(self) -> float:
        return self.exact - self.bound


def adaptive_ground_energy(p: QuadraticModeParams, tol: float = 1e-8, max_cutoff: int = 96) -> tuple[float, bool]:
    """Grow the cutoff from an occupation estimate until two levels agree.

    Returns the last truncated energy and whether the tolerance was met;
    with kappa = 0 the tridiagonal pair sector allows much larger cutoffs.
    """
    cap = max_cutoff if p.kappa != 0 else 64 * max_cutoff
    c = int(min(cap, max(16, 12 * mean_occupation(p) + 24)))
    prev = truncated_ground_energy(p, c)
    while True:
        nxt_c = min(cap, int(1.5 * c))
        if nxt_c == c:
            return prev, False
        nxt = truncated_ground_energy(p, nxt_c)
        if abs(nxt - prev) <= tol:
            return nxt, True
        prev, c = nxt, nxt_c


def random_draw(rng: np.random.Generator) -> QuadraticModeParams:
    A = 10.0 * (1.0 - rng.random())
    Bp, Bm = 10.0 * rng.random(2)
    kap = 3.0 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    return QuadraticModeParams(A, Bp, Bm, complex(kap))


def random_check(n: int, rng: np.random.Generator, tol: float = 1e-8, max_cutoff: int = 96) -> list[DrawResult]:
    out = []
    for _ in range(n):
        p = random_draw(rng)
        e, ok = adaptive_ground_energy(p, tol, max_cutoff)
        out.append(DrawResult(p, bogolubov_bound(p), e, ok))
    return out


# ---------------------------------------------------------------------------
# Foldy energy density


def foldy_energy_density(rho: float, ell: float) -> float:
    return -I0 * rho**1.25 * ell**3


def foldy_lattice_sum(rho: float, ell: float, reach: float = 8.0) -> float:
    """-1/2 sum over k in (2 pi / ell) Z^3 \\ {0} of the bracket with g = 4 pi rho / k^2, f = k^2/2.

    Modes beyond ``reach`` rho^{1/4} are replaced by the continuum integral,
    where the summand is smooth and tiny.
    """
    step = 2.0 * np.pi / ell
    nmax = int(np.ceil(reach * rho**0.25 / step))
    n = np.arange(-nmax, nmax + 1)
    n2 = n[:, None] ** 2 + n[None, :] ** 2
    total = 0.0
    for a in n:
        m2 = a * a + n2
        keep = (m2 > 0) & (m2 <= nmax * nmax)
        k2 = step * step * m2[keep]
        total += float(np.sum(bracket(FOUR_PI * rho / k2, 0.5 * k2)))
    kc = step * nmax
    tail = integrate.quad(
        lambda k: FOUR_PI * k * k * bracket(FOUR_PI * rho / (k * k), 0.5 * k * k), kc, np.inf, epsrel=1e-10
    )[0]
    return -0.5 * (total + tail * ell**3 / (2.0 * np.pi) ** 3)


def cubic_lattice_zeta() -> float:
    """Regularized sum over nonzero n in Z^3 of |n|^{-2}, by Ewald splitting.

    Equal to lim_N (sum_{0<|n|<N} |n|^{-2} - 4 pi N).
    """
    r = np.arange(-6, 7)
    n = np.sqrt(r[:, None, None] ** 2 + r[None, :, None] ** 2 + r[None, None, :] ** 2).ravel()
    n = n[n > 0]
    x = np.pi * n * n
    return float(np.pi * (np.sum(np.exp(-x) / x + special.erfc(np.sqrt(x)) / n) - 3.0))


def foldy_finite_size_correction(rho: float, ell: float) -> float:
    """Leading difference (lattice sum) - (integral): -zeta rho ell^2 / (2 pi).

    It comes from the 4 pi rho / k^2 singularity at the excluded k = 0 cell,
    so the relative error decays only like (rho ell^4)^{-1/4}.
    """
    return -cubic_lattice_zeta() * rho * ell * ell / (2.0 * np.pi)


# ---------------------------------------------------------------------------
# per-k density of the quadratic Hamiltonian bound


def hq_scalar_bound(k, nu: float, ell: float, cut: CutoffPair, gamma: float, tpar: float):
    """-1/2 (2 pi)^{-3} [g + f - sqrt((g + f)^2 - g^2)] with g = nu V_rR^(k)."""
    k = np.asarray(k, dtype=float)
    kk = np.linalg.norm(k, axis=-1) if k.ndim and k.shape[-1] == 3 else np.abs(k)
    g = nu * v_rR_hat(kk, cut)
    f = 0.5 * ell**3 * gamma * kk**4 / (kk * kk + (ell * tpar**6) ** -2)
    return -0.5 * bracket(g, f) / (2.0 * np.pi) ** 3


def hq_coulomb_integral(nu: float, ell: float, gamma: float) -> float:
    """Radial integral of the density with V^ -> 4 pi / k^2 and the f cutoff removed."""

    def dens(k):
        return FOUR_PI * k * k * bracket(FOUR_PI * nu / (k * k), 0.5 * ell**3 * gamma * k * k)

    scale = (nu / (ell**3 * gamma)) ** 0.25
    pts = [0.0, scale, 10 * scale, np.inf]
    tot = sum(integrate.quad(dens, a, b, epsabs=0.0, epsrel=1e-11, limit=200)[0] for a, b in zip(pts[:-1], pts[1:]))
    return -0.5 * tot / (2.0 * np.pi) ** 3
