"""Critical exponents: typical geodesics, the real axis and periodic points."""
from renorm_julia import MapParams
from renorm_julia.exponents import complex_exponent_experiment, periodic_exponent_experiment, real_exponent_at_tc

for b in (2, 3, 4):
    r = complex_exponent_experiment(MapParams(b), n_angles=50, K_levels=16, seed=7)
    note = "  (b=2 is the marginal case; exploratory)" if b == 2 else ""
    print(f"b={b}: F'' envelope slope median {r.median_slope:.4f}, IQR {r.iqr[0]:.3f}..{r.iqr[1]:.3f}, "
          f"predicted {r.predicted:.5f}{note}")

print()
for b in (2, 3, 4):
    r = real_exponent_at_tc(MapParams(b))
    print(f"b={b}: order m={r.m}, slope {r.fit.slope:.4f}, predicted {r.fit.predicted:.4f}")

print()
for word in [(0, 1), (0, 2), (0, 0, 1)]:
    r = periodic_exponent_experiment(MapParams(3), word)
    print(f"word {word}: chi {r.chi:.4f}, m={r.m}, slope {r.fit.slope:.4f}, predicted {r.fit.predicted:.4f}")
