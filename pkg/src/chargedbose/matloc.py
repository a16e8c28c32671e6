"""Localizing a vector of a large Hermitian matrix to a window of M consecutive indices.

For a unit vector psi with lambda = (psi, A psi) the diagonal sums

    d_0 = sum_j A_jj |psi_j|^2,   d_k = 2 Re sum_j conj(psi_j) A_{j,j+k} psi_{j+k}

add up to lambda.  Multiplying psi by a taper w sliding over all windows that
meet the index range, the norm-weighted mean of the window Rayleigh quotients
is sum_k (c(k)/c(0)) d_k with c the taper autocorrelation.  Hence the best
window has

    (phi, A phi) <= lambda + sum_k (1 - c(k)/c(0)) |d_k|,

and 1 - c(k)/c(0) <= (pi^2/2) k^2 / M^2 for the half-cosine taper, vanishing
sums aside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllWindowsDegenerate, NotHermitian, NotNormalized

C_WORK = 10.0


@dataclass(frozen=True)
class LocalizationReport:
    lam: float
    d: np.ndarray
    window_start: int
    phi: np.ndarray
    value: float
    bound: float
    constant: float

    @property
    def holds(self) -> bool:
        return self.value <= self.bound + 1e-12 * max(1.0, abs(self.bound))

    @property
    def slack(self) -> float:
        return self.bound - self.value


def _check(A, psi):
    A = np.asarray(A)
    psi = np.asarray(psi)
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.ndim != 2 or A.shape[0] != A.shape[1] or np.max(np.abs(A - A.conj().T), initial=0.0) > 1e-12 * scale:
        raise NotHermitian("matrix is not Hermitian")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise NotNormalized("psi must have unit norm")
    return A, psi


def diagonal_sums(A, psi) -> np.ndarray:
    A, psi = _check(A, psi)
    N = len(psi)
    d = np.empty(N)
    d[0] = float(np.real(np.sum(np.diag(A) * np.abs(psi) ** 2)))
    for k in range(1, N):
        d[k] = 2.0 * float(np.real(np.sum(np.conj(psi[:-k]) * np.diagonal(A, k) * psi[k:])))
    return d


def taper(M: int, kind: str = "cosine") -> np.ndarray:
    if kind == "cosine":
        return np.sin(np.pi * np.arange(1, M + 1) / (M + 1))
    if kind == "flat":
        return np.ones(M)
    raise ValueError(f"unknown taper {kind!r}")


def taper_deficit(M: int, kind: str = "cosine") -> np.ndarray:
    """1 - c(k)/c(0) for k = 0..M, with c the autocorrelation of the taper."""
    w = taper(M, kind)
    c = np.array([np.dot(w[: M - k], w[k:]) for k in range(M)] + [0.0])
    return 1.0 - c / c[0]


def localization_bound(lam: float, d, M: int, C: float = C_WORK) -> float:
    d = np.abs(np.asarray(d, dtype=float))
    k = np.arange(len(d))
    near = (k >= 1) & (k < M)
    return float(lam + C / M**2 * np.sum(k[near] ** 2 * d[near]) + C * np.sum(d[k >= M]))


def window_vector(psi, start: int, M: int, kind: str = "cosine") -> np.ndarray:
    """Taper times psi on indices start..start+M-1 (clipped to the range), not normalized."""
    N = len(psi)
    w = taper(M, kind)
    out = np.zeros(N, dtype=np.result_type(psi, float))
    lo, hi = max(0, start), min(N, start + M)
    if lo < hi:
        out[lo:hi] = w[lo - start : hi - start] * psi[lo:hi]
    return out


def localize(A, psi, M: int, kind: str = "cosine", C: float = C_WORK) -> LocalizationReport:
    A, psi = _check(A, psi)
    N = len(psi)
    if not 1 <= M <= N:
        raise ValueError("need 1 <= M <= N")
    d = diagonal_sums(A, psi)
    lam = float(np.real(np.vdot(psi, A @ psi)))
    best = None
    for n in range(-(M - 1), N):
        v = window_vector(psi, n, M, kind)
        nrm2 = float(np.real(np.vdot(v, v)))
        if nrm2 <= 1e-300:
            continue
        val = float(np.real(np.vdot(v, A @ v))) / nrm2
        if best is None or val < best[0]:
            best = (val, n, v / np.sqrt(nrm2))
    if best is None:
        raise AllWindowsDegenerate("psi vanishes on every window")
    val, n, phi = best
    return LocalizationReport(lam, d, n, phi, val, localization_bound(lam, d, M, C), C)


def random_band_matrix(rng: np.random.Generator, N: int = 200, band: int = 5) -> np.ndarray:
    A = np.zeros((N, N), dtype=complex)
    for k in range(band + 1):
        vals = rng.standard_normal(N - k) + (1j * rng.standard_normal(N - k) if k else 0.0)
        A += np.diag(vals, k)
    return np.triu(A) + np.triu(A, 1).conj().T


def random_unit(rng: np.random.Generator, N: int) -> np.ndarray:
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return v / np.linalg.norm(v)


def ensemble(rng: np.random.Generator, trials: int = 100, N: int = 200, band: int = 5, M: int = 20, C: float = C_WORK):
    return [localize(random_band_matrix(rng, N, band), random_unit(rng, N), M, C=C) for _ in range(trials)]
