"""Two-mode quadratic Hamiltonians: the analytic bound against exact diagonalization."""
import numpy as np

from chargedbose import bogolubov as bg

p = bg.QuadraticModeParams(3.0, 2.0, 2.0, 0.0)
print("bound", bg.bogolubov_bound(p), "exact", bg.truncated_ground_energy(p, 80))

for kappa in (0.5, 1.0, 2.0):
    p = bg.QuadraticModeParams(3.0, 2.5, 1.5, kappa)
    exact = bg.exact_ground_energy_canonical(p, bg.FockTruncation(2, 60))
    print(f"kappa={kappa}: bound {bg.bogolubov_bound(p):.8f}  exact {exact:.8f}  completed square {bg.completed_square_energy(p):.8f}")

draws = bg.random_check(20, np.random.default_rng(0))
print("smallest gap over 20 random draws:", min(d.gap for d in draws))

# mode sum against the Foldy density; the raw sum misses a (rho l^4)^(-1/4) term
for rho in (1e4, 1e6):
    ref = bg.foldy_energy_density(rho, 1.0)
    raw = bg.foldy_lattice_sum(rho, 1.0)
    fixed = raw - bg.foldy_finite_size_correction(rho, 1.0)
    print(f"rho l^4={rho:.0e}: raw rel err {raw / ref - 1:+.4f}, corrected {fixed / ref - 1:+.2e}")
