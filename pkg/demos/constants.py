"""The two scalar constants: I0 three ways, then A from shooting and from the flow."""
import numpy as np

from chargedbose import meanfield as mf
from chargedbose import scalars as sc

r = sc.i0_all()
print(f"I0 closed form   {r.closed_form:.15f}")
print(f"I0 1d quadrature {r.quad_1d:.15f}")
print(f"I0 radial form   {r.quad_radial:.15f}")

# the screened integral grows linearly in a near 0
for a in (1e-2, 1e-3, 1e-4):
    ex = sc.i_of_a(a) - sc.I0
    print(f"a={a:.0e}  I(a)-I0={ex:.3e}  /a={ex / a:.5f}  /sqrt(a)={ex / np.sqrt(a):.5f}")

p = mf.minimizer()
print(f"\nshooting: A = {-p.energy:.12f}  mu = {p.mu:.10f}  virial residual {mf.virial_residual(p):.1e}")
A, raw = mf.flow_dyson_constant()
print(f"flow:     A = {A:.7f} (grids give {', '.join(f'{v:.6f}' for v in raw)})")
for N in (10, 100, 1000):
    print(f"E({N}) ~ {mf.dyson_energy(N):.4f}")
