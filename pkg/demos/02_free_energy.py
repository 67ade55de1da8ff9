"""Free energy from the renormalization series, in both variables."""
import numpy as np

from renorm_julia import MapParams, PhysicalParams, eval_F_jet, eval_physical_free_energy
from renorm_julia.free_energy import direct_free_energy, functional_residuals

p = MapParams(2)
print("F(1) =", eval_F_jet(p, 1.0, order=0).F, " expected", 4 * np.log(2) / 3)

jet = eval_F_jet(p, 0.15 + 0.1j, order=4)
print("jet at 0.15+0.1i:", jet)

r = functional_residuals(p, 0.2 + 0.05j)
print("renormalization identity residuals:", abs(r.r0), abs(r.r1), abs(r.r2))

print("\n   T        free energy (series)    direct summation")
for T in (0.5, 1.0, 2.0, 4.0, 8.0):
    pp = PhysicalParams(1.0, T)
    print(f"{T:5.1f}   {eval_physical_free_energy(pp, 2).real:.15f}   {direct_free_energy(pp, 2).real:.15f}")
