"""Exact enumeration on diamond lattices and bond decimation."""
import numpy as np

from renorm_julia.lattice_oracle import build_lattice, coupling_flow, decimate_cell, exact_logZ, verify_decimation

for b, n in [(2, 0), (2, 1), (2, 2), (3, 1), (3, 2)]:
    g = build_lattice(b, n)
    print(f"Gamma_{n} (b={b}): {g.sites} sites, {g.n_bonds} bonds, ln Z(K=0.5) = {exact_logZ(g, 0.5):.12f}")

K = np.linspace(0.05, 2.0, 20)
for b, n in [(2, 0), (2, 1), (3, 0)]:
    print(f"decimation b={b}, n={n}: max residual {max(verify_decimation(b, n, k) for k in K):.2e}")

print("\nK=0.7, b=2:", decimate_cell(2, 0.7))
print("\n k   K_k          exp(-2K_k/b)   t-orbit")
for k, Kk, tk, orbit in coupling_flow(2, 0.6, 5):
    print(f"{k:2d}   {Kk:.8f}   {tk:.8f}     {orbit:.8f}")
