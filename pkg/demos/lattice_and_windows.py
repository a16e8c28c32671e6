"""Lattice energy of a spike, the interpolant identity, and one matrix localization."""
import numpy as np

from chargedbose import lattice as lt
from chargedbose import matloc as ml

d = lt.LatticeField.delta()
print("T(delta) =", lt.lattice_energy(d), " Dirichlet energy of interpolant =", lt.dirichlet_energy(lt.interpolate(d)))

rng = np.random.default_rng(1)
S = lt.random_field(rng)
print("random field", S.dims, "T =", lt.lattice_energy(S), "Sobolev ratio =", lt.sobolev_ratio(S))
r = lt.lattice_lp_bounds(S, 2.5, 0.5)
print("L^5/2 chain slacks:", {k: round(v, 6) for k, v in r.slacks.items()})

A = ml.random_band_matrix(rng, 200, 5)
psi = ml.random_unit(rng, 200)
for M in (10, 20, 40):
    rep = ml.localize(A, psi, M)
    print(f"M={M}: lambda {rep.lam:+.4f}  window value {rep.value:+.4f}  bound {rep.bound:+.4f}")
