"""Green potential, geodesics of the basin of 0 and where they land."""
from renorm_julia import MapParams, boundary_point, eval_map, geodesic_point, green_potential
from renorm_julia.boettcher import periodic_boundary_point, preimage_tree_tc

p = MapParams(3)
print("g(0.2) =", green_potential(p, 0.2), "  g(f(0.2)) / 3 =", green_potential(p, eval_map(p, 0.2)) / 3)

theta = 0.2718
print(f"\ngeodesic at angle {theta}:")
for k in range(0, 13, 3):
    g = 3.0 ** -k
    print(f"  g = {g:.2e}  t = {geodesic_point(p, theta, g):.10f}")
print("landing point:", boundary_point(p, theta))

print("\nangle 0 lands on t_c:", boundary_point(p, 0.0).real, p.fixed_point.t_c)

tree = preimage_tree_tc(p, 2)
for (word, x), a in zip(tree, tree.angles):
    print(f"  word {word}  angle {a:.4f}  point {x:.6f}")

pp = periodic_boundary_point(p, (0, 1))
print("\nperiod-2 point coded (0,1):", pp.point, " Lyapunov exponent of the cycle:", pp.chi)
