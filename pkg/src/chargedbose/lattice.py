"""Lattice fields, their trilinear interpolants and the associated inequalities.

T(S) couples only face-diagonal (weight 1/12) and body-diagonal (weight 1/24)
neighbours.  Summing over ordered pairs, so that every unordered pair enters
twice, makes T(S) equal to the Dirichlet energy of the trilinear interpolant;
edge neighbours drop out because the Q1 stiffness matrix has zero coupling
along cube edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateField

PAIR_CONVENTION = "ordered"

FACE_DIAGONALS = np.array([v for v in itertools.product((-1, 0, 1), repeat=3) if sum(map(abs, v)) == 2])
BODY_DIAGONALS = np.array([v for v in itertools.product((-1, 1), repeat=3)])
EDGES = np.array([v for v in itertools.product((-1, 0, 1), repeat=3) if sum(map(abs, v)) == 1])
CORNERS = np.array(list(itertools.product((0, 1), repeat=3)))  # corner offsets of a unit cube

# element matrices of the trilinear (Q1) cube on [0, 1]^3
_M1 = np.array([[1 / 3, 1 / 6], [1 / 6, 1 / 3]])
_K1 = np.array([[1.0, -1.0], [-1.0, 1.0]])
CUBE_STIFFNESS = np.kron(np.kron(_K1, _M1), _M1) + np.kron(np.kron(_M1, _K1), _M1) + np.kron(np.kron(_M1, _M1), _K1)


@dataclass(frozen=True)
class LatticeField:
    """S on the box origin + [0, dims); zero elsewhere."""

    origin: tuple
    dims: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != tuple(self.dims):
            raise ValueError(f"values shape {v.shape} does not match dims {self.dims}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "origin", tuple(int(o) for o in self.origin))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @classmethod
    def from_array(cls, values, origin=(0, 0, 0)) -> "LatticeField":
        values = np.asarray(values, dtype=float)
        return cls(tuple(origin), values.shape, values)

    @classmethod
    def delta(cls) -> "LatticeField":
        return cls.from_array(np.ones((1, 1, 1)))

    def padded(self, width: int = 1) -> np.ndarray:
        return np.pad(self.values, width)

    def __call__(self, sigma):
        idx = tuple(int(s) - o for s, o in zip(sigma, self.origin))
        if all(0 <= i < d for i, d in zip(idx, self.dims)):
            return float(self.values[idx])
        return 0.0

    def scaled(self, c: float) -> "LatticeField":
        return LatticeField(self.origin, self.dims, c * self.values)

    def to_csv(self, path) -> None:
        idx = np.argwhere(np.ones(self.dims, dtype=bool))
        with open(path, "w") as fh:
            fh.write("sx,sy,sz,value\n")
            for i in idx:
                s = np.asarray(self.origin) + i
                fh.write(f"{s[0]},{s[1]},{s[2]},{self.values[tuple(i)]!r}\n")


def _pair_sum(S: LatticeField, offsets) -> float:
    """sum over sigma and offsets of (S(sigma) - S(sigma + v))^2, i.e. ordered pairs."""
    p = S.padded(1)
    n = np.array(p.shape)
    tot = 0.0
    for v in offsets:
        lo = np.maximum(0, -v)
        hi = n - np.maximum(0, v)
        a = p[lo[0] : hi[0], lo[1] : hi[1], lo[2] : hi[2]]
        b = p[lo[0] + v[0] : hi[0] + v[0], lo[1] + v[1] : hi[1] + v[1], lo[2] + v[2] : hi[2] + v[2]]
        tot += float(np.sum((a - b) ** 2))
    return tot


def lattice_energy(S: LatticeField, convention: str = PAIR_CONVENTION) -> float:
    ordered = _pair_sum(S, FACE_DIAGONALS) / 12.0 + _pair_sum(S, BODY_DIAGONALS) / 24.0
    if convention == "ordered":
        return ordered
    if convention == "unordered":
        return 0.5 * ordered
    raise ValueError(f"unknown pair convention {convention!r}")


def nearest_neighbour_energy(S: LatticeField) -> float:
    """sum over ordered nearest-neighbour pairs of (S(s1) - S(s2))^2."""
    return _pair_sum(S, EDGES)


def trilinear_weights(x):
    """lambda_tau(x) = prod (1/2 + tau_i x_i) for the 8 corners tau of {-1, 1}^3, x in [-1/2, 1/2]^3.

    Output shape (..., 8) with corners ordered like ``CORNERS`` (tau = 2 c - 1).
    """
    x = np.asarray(x, dtype=float)
    tau = 2 * CORNERS - 1
    return np.prod(0.5 + tau * x[..., None, :], axis=-1)


@dataclass(frozen=True)
class TrilinearInterpolant:
    """Corner values of every unit cube meeting the support of S.

    ``corners[c]`` holds the 8 values at cube ``lower[c] + CORNERS``.
    """

    lower: np.ndarray
    corners: np.ndarray

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        base = np.floor(x).astype(int)
        local = x - base - 0.5
        table = {tuple(l): i for i, l in enumerate(self.lower)}
        out = np.zeros(len(x))
        w = trilinear_weights(local)
        for j, b in enumerate(base):
            i = table.get(tuple(b))
            if i is not None:
                out[j] = w[j] @ self.corners[i]
        return out


def interpolate(S: LatticeField) -> TrilinearInterpolant:
    p = S.padded(1)
    n = np.array(p.shape) - 1
    lower = np.argwhere(np.ones(n, dtype=bool))
    corners = np.stack([p[lower[:, 0] + c[0], lower[:, 1] + c[1], lower[:, 2] + c[2]] for c in CORNERS], axis=1)
    keep = np.any(corners != 0, axis=1)
    return TrilinearInterpolant(lower[keep] + np.asarray(S.origin) - 1, corners[keep])


def dirichlet_energy(phi: TrilinearInterpolant) -> float:
    """Exact int |grad phi|^2: one quadratic form per cube."""
    c = phi.corners
    return float(np.einsum("ci,ij,cj->", c, CUBE_STIFFNESS, c))


def power_integral(phi: TrilinearInterpolant, beta: float, order: int = 10) -> float:
    """int phi^beta over R^3 for phi >= 0 by tensor Gauss-Legendre on each cube."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * x
    w = 0.5 * w
    pts = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    wts = np.einsum("i,j,k->ijk", w, w, w).ravel()
    vals = phi.corners @ trilinear_weights(pts).T
    return float(np.sum(np.clip(vals, 0.0, None) ** beta @ wts))


# ---------------------------------------------------------------------------
# convexity and Jensen-type inequalities


def jensen_gap(values, weights, beta: float, C: float | None = None) -> tuple[float, float, float]:
    """(lhs, mid, rhs) of (sum l S)^b <= sum l S^b <= (sum l S)^b + C D sum S^{b-1}.

    D = (sum_{i<j} (S_i - S_j)^2)^{1/2}.  The default C = 2 beta follows from
    |a^b - c^b| <= b |a - c| (a^{b-1} + c^{b-1}) and |S_i - Y| <= D.
    """
    S = np.asarray(values, dtype=float)
    lam = np.asarray(weights, dtype=float)
    if np.any(S < 0) or np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
        raise ValueError("need nonnegative values and convex weights")
    C = 2.0 * beta if C is None else C
    Y = float(lam @ S)
    lhs = Y**beta
    mid = float(lam @ S**beta)
    diff = S[:, None] - S[None, :]
    D = float(np.sqrt(0.5 * np.sum(diff * diff)))
    rhs = lhs + C * D * float(np.sum(S ** (beta - 1.0)))
    return lhs, mid, rhs


def jensen_constant_needed(values, weights, beta: float) -> float:
    """Smallest C making the right inequality hold for this draw."""
    lhs, mid, _ = jensen_gap(values, weights, beta, C=0.0)
    S = np.asarray(values, dtype=float)
    diff = S[:, None] - S[None, :]
    D = float(np.sqrt(0.5 * np.sum(diff * diff)))
    denom = D * float(np.sum(S ** (beta - 1.0)))
    return 0.0 if denom == 0 else (mid - lhs) / denom


@dataclass(frozen=True)
class LpReport:
    beta: float
    delta: float
    integral: float
    upper: float
    lower: float
    lower_5_2: float | None
    lower_sobolev: float | None

    @property
    def slacks(self) -> dict:
        out = {"upper": self.upper - self.integral, "lower": self.integral - self.lower}
        if self.lower_5_2 is not None:
            out["lower_5_2"] = self.integral - self.lower_5_2
            out["lower_sobolev"] = self.integral - self.lower_sobolev
        return out


@dataclass(frozen=True)
class LpSides:
    """Pieces of the two chains, from which required constants follow."""

    beta: float
    integral: float
    sum_beta: float
    T: float
    sum2: float
    sum6: float
    sum52: float


def lp_sides(S: LatticeField, beta: float) -> LpSides:
    v = S.values
    if np.any(v < 0):
        raise ValueError("S must be nonnegative")
    phi = interpolate(S)
    return LpSides(
        beta=beta,
        integral=power_integral(phi, beta),
        sum_beta=float(np.sum(v**beta)),
        T=lattice_energy(S),
        sum2=float(np.sum(v**2)),
        sum6=float(np.sum(v**6)),
        sum52=float(np.sum(v**2.5)),
    )


def required_constants(s: LpSides, delta: float) -> dict:
    """Smallest C in each lower chain for which the draw satisfies it."""
    out = {}
    dT = s.T
    out["chain_beta"] = ((1 - delta) * s.sum_beta - s.integral) / (delta ** (-(s.beta - 1)) * dT ** (s.beta / 2))
    if s.beta == 2.5:
        excess = s.sum52 - delta * dT - s.integral
        out["chain_5_2"] = excess / (delta**-1 * s.sum6**0.25 * s.sum2**0.75)
        out["chain_sobolev"] = excess / (delta**-7 * s.sum2**3)
    return out


def lattice_lp_bounds(S: LatticeField, beta: float, delta: float, constants: dict | None = None) -> LpReport:
    """Evaluate both sides of the lattice L^beta chains; constants default to the calibrated fixtures."""
    if beta < 2:
        raise ValueError("beta must be at least 2")
    c = dict(CALIBRATED_LP_CONSTANTS if constants is None else constants)
    s = lp_sides(S, beta)
    cb = c.get(("chain_beta", beta), c.get("chain_beta"))
    lower = (1 - delta) * s.sum_beta - cb * delta ** (-(beta - 1)) * s.T ** (beta / 2)
    l52 = lsob = None
    if beta == 2.5:
        l52 = s.sum52 - delta * s.T - c["chain_5_2"] * delta**-1 * s.sum6**0.25 * s.sum2**0.75
        lsob = s.sum52 - delta * s.T - c["chain_sobolev"] * delta**-7 * s.sum2**3
    return LpReport(beta, delta, s.integral, s.sum_beta, lower, l52, lsob)


# ---------------------------------------------------------------------------
# random ensembles


def random_field(rng: np.random.Generator, max_side: int = 6) -> LatticeField:
    """Sparse nonnegative field; half the draws use heavy-tailed values."""
    dims = tuple(int(d) for d in rng.integers(1, max_side + 1, size=3))
    n = int(np.prod(dims))
    fill = rng.uniform(0.05, 1.0)
    mask = rng.random(dims) < fill
    if not mask.any():
        mask.flat[rng.integers(n)] = True
    if rng.random() < 0.5:
        vals = np.abs(rng.standard_normal(dims))
    else:
        vals = rng.pareto(1.5, size=dims)
    scale = 10.0 ** rng.uniform(-2, 2)
    vals = np.where(mask, vals, 0.0) * scale
    if not np.any(vals > 0):
        vals.flat[int(np.flatnonzero(mask)[0])] = scale
    return LatticeField.from_array(vals)


def random_signed_field(rng: np.random.Generator, side: int = 4) -> LatticeField:
    return LatticeField.from_array(rng.standard_normal((side, side, side)))


def sobolev_ratio(S: LatticeField) -> float:
    T = lattice_energy(S)
    if T == 0:
        raise DegenerateField("T(S) vanishes; S must be identically zero")
    return float(np.sum(np.abs(S.values) ** 6) ** (1.0 / 3.0) / T)


def calibrate_sobolev(rng: np.random.Generator, n: int = 1000) -> float:
    return max(sobolev_ratio(random_field(rng)) for _ in range(n))


def calibrate_lp(rng: np.random.Generator, n: int = 100, deltas=(0.1, 0.5), margin: float = 2.0) -> dict:
    """Largest required constant per chain over an ensemble, times ``margin``."""
    need = {"chain_beta": 0.0, "chain_5_2": 0.0, "chain_sobolev": 0.0}
    best6 = 0.0
    for _ in range(n):
        S = random_field(rng)
        s6 = lp_sides(S, 6.0)
        best6 = max(best6, required_constants(s6, 0.5)["chain_beta"])
        s52 = lp_sides(S, 2.5)
        for d in deltas:
            r = required_constants(s52, d)
            for key in need:
                need[key] = max(need[key], r[key])
    return {
        ("chain_beta", 6.0): margin * best6,
        ("chain_beta", 2.5): margin * need["chain_beta"],
        "chain_5_2": margin * need["chain_5_2"],
        "chain_sobolev": margin * need["chain_sobolev"],
    }


# frozen output of calibrate_lp / calibrate_sobolev with np.random.default_rng(CALIBRATION_SEED)
CALIBRATION_SEED = 20240601
CALIBRATED_LP_CONSTANTS: dict = {
    ("chain_beta", 6.0): 0.0015893723122642038,
    ("chain_beta", 2.5): 0.06516472974634954,
    "chain_5_2": 0.12298581147508379,
    "chain_sobolev": 1.9569562992723386e-05,
}
SOBOLEV_CONSTANT = 0.3773060118062486


# ---------------------------------------------------------------------------
# occupancy map


def occupancy_to_field(n: LatticeField, ell: float) -> LatticeField:
    if np.any(n.values < 0):
        raise ValueError("occupations must be nonnegative")
    return LatticeField(n.origin, n.dims, (np.sqrt(n.values + 1.0) - 1.0) / ell)


def twenty_vector_weights():
    """(vectors, exact weights) of the face- and body-diagonal stencil."""
    vecs = [tuple(v) for v in FACE_DIAGONALS] + [tuple(v) for v in BODY_DIAGONALS]
    wts = [Fraction(1, 12)] * len(FACE_DIAGONALS) + [Fraction(1, 24)] * len(BODY_DIAGONALS)
    return vecs, wts
