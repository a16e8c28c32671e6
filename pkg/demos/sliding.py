"""Bump family and the smallest screening frequency with a nonnegative transform."""
from chargedbose import potentials as pt

for t in (0.1, 0.2, 0.4):
    fam = pt.build_bumps(t)
    r = pt.omega_search(t, fam=fam, omega0=0.5)
    print(f"t={t}: gamma {fam.gamma:.4f}  gamma~ {fam.gamma_tilde:.4f}  omega {r.omega:.3f}  min F^ {r.min_transform:.2e}")
