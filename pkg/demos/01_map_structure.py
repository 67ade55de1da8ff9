"""The renormalization map, its decomposition and the critical point t_c."""
import cmath
import math

from renorm_julia import MapParams, critical_orbits, decompose, eval_map

for b in (2, 3, 4):
    p = MapParams(b)
    fp = p.fixed_point
    print(f"b={b}: t_c = {fp.t_c:.15f}, f'(t_c) = {fp.multiplier:.12f}, alpha_c = {p.alpha_c:.5f}")

p = MapParams(3)
t = 0.4 + 0.3j
d = decompose(p, t)
print("\nf(t) directly      :", eval_map(p, t))
print("K(S(t)) step by step:", d)

# critical points: roots of unity go to 1, roots of -1 pass through infinity to 0
for orbit in critical_orbits(p):
    print(orbit)

# the temperature variable is symmetric under t -> 1/t
print("\nf(2.5) - f(0.4) =", abs(eval_map(p, 2.5) - eval_map(p, 0.4)))
print("f(e^{i pi/3}) =", eval_map(p, cmath.exp(1j * math.pi / 3)))
