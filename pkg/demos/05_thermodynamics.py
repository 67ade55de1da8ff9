"""Lyapunov exponent, pressure and the backward cocycle on the basin boundary."""
import math

import numpy as np

from renorm_julia import MapParams
from renorm_julia.thermo import backward_cocycle_batch, lyapunov_harmonic, pressure_curve, spectral_radius_estimate

for b in (2, 3, 4):
    est = lyapunov_harmonic(MapParams(b), 20000, seed=b)
    print(f"b={b}: harmonic mean of ln|f'| = {est.estimate:.5f} +- {est.stderr:.5f}   ln b = {math.log(b):.5f}")

p = MapParams(3)
kappas = np.arange(0, 0.55, 0.05)
print("\nkappa   P_12(kappa)   (ln 3 =", math.log(3), ")")
for e in pressure_curve(p, kappas, 12):
    print(f"{e.kappa:5.2f}   {e.value:.6f}")

r = spectral_radius_estimate(p, 10)
print("\nlower bound on ln r_beta:", r.value, "from cycle", r.best_word, " vs ln(3/2) =", math.log(1.5))

m = backward_cocycle_batch(p, np.linspace(0, 1, 1000, endpoint=False), 30, np.arange(1000))[:, -1]
print("backward cocycle mean at n=30:", m.mean(), " vs -ln(3/2) =", -math.log(1.5))
