"""Fast invariant suite behind ``renorm-julia selftest``."""
from __future__ import annotations

import cmath
import math

import numpy as np

from .boettcher import geodesic_points, green_potential_array
from .free_energy import functional_residuals_array, series_derivatives
from .lattice_oracle import verify_decimation
from .rational_map import INFINITY, MapParams, chebyshev, eval_map, koebe, mobius
from .thermo import lyapunov_harmonic, pressure_curve


def _disk_points(n: int, seed: int = 1, rmax: float = 0.9) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    r = rmax * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def conjugacy_sample(n: int, seed: int = 5, min_dist: float = 0.25) -> np.ndarray:
    """Points with |t| <= 2 at distance >= min_dist from t = 1.

    phi(K(t)) grows like |1 - t|^-2 there and 1 - K(t) cancels, so the
    absolute error of the conjugacy identity grows like |1 - t|^-4.
    """
    out = []
    while sum(len(o) for o in out) < n:
        t = _disk_points(4 * n, seed, rmax=2.0)
        out.append(t[np.abs(t - 1.0) >= min_dist])
        seed += 7919
    return np.concatenate(out)[:n]


def basin_points(b: int, n: int, seed: int = 1, gmin: float = 1e-3) -> np.ndarray:
    """n random points of the immediate basin of 0 with potential above gmin."""
    out = []
    while sum(len(o) for o in out) < n:
        t = _disk_points(4 * n, seed)
        g = green_potential_array(b, t)
        out.append(t[np.isfinite(g) & (g > gmin)])
        seed += 7919
    return np.concatenate(out)[:n]


def run_checks(b: int):
    """Yield (name, passed, value, threshold) rows."""
    p = MapParams(b)

    err = max(abs(eval_map(p, 0j)), abs(eval_map(p, 1 + 0j) - 1))
    err = max([err] + [abs(eval_map(p, cmath.exp(2j * math.pi * k / b)) - 1) for k in range(b)])
    beta_ok = all(
        eval_map(p, cmath.exp(1j * math.pi * (2 * k + 1) / b)) is INFINITY for k in range(b)
    ) and eval_map(p, INFINITY) == 0
    yield "superattracting fixed points and critical orbits", bool(err < 1e-12 and beta_ok), err, 1e-12

    ts = conjugacy_sample(200)
    conj = max(abs(mobius(koebe(complex(t))) - chebyshev(mobius(complex(t)))) for t in ts)
    yield "Chebyshev conjugacy of K", bool(conj < 1e-11), conj, 1e-11

    r0, r1, r2 = functional_residuals_array(b, basin_points(b, 100))
    res = float(max(np.abs(r0).max(), np.abs(r1).max(), np.abs(r2).max()))
    yield "renormalization identities for F, F', F''", bool(res < 1e-8), res, 1e-8

    F1 = float(series_derivatives(b, 1.0, 0)[0].real)
    d = abs(F1 - 2 * b * math.log(2) / (2 * b - 1))
    yield "F at the high-temperature fixed point", bool(d < 1e-12), d, 1e-12

    t = basin_points(b, 100, seed=2)
    g = green_potential_array(b, t)
    gf = green_potential_array(b, 4 * t ** b / (1 + t ** b) ** 2)
    d = float(np.nanmax(np.abs(gf - b * g) / np.maximum(1.0, b * g)))
    yield "Green potential equivariance", bool(d < 1e-8), d, 1e-8

    rng = np.random.Generator(np.random.Philox(key=3))
    thetas = rng.random(20)
    gs = 10.0 ** rng.uniform(-4, 0, 20)
    worst = 0.0
    for th, gg in zip(thetas, gs):
        a, _ = geodesic_points(p, [th], float(gg))
        c, _ = geodesic_points(p, [(b * th) % 1.0], float(b * gg))
        worst = max(worst, abs(eval_map(p, complex(a[0])) - complex(c[0])))
    yield "geodesic equivariance", bool(worst < 1e-8), worst, 1e-8

    P0 = pressure_curve(p, [0.0], 6)[0].value
    d = abs(P0 - math.log(b))
    yield "pressure at kappa = 0", bool(d == 0.0), d, 0.0

    est = lyapunov_harmonic(p, 2000, seed=0)
    rel = abs(est.estimate / math.log(b) - 1)
    yield "harmonic Lyapunov exponent (M = 2000)", bool(rel < 0.03), rel, 0.03

    dec = max(verify_decimation(b, 0, K) for K in np.linspace(0.05, 2.0, 5))
    yield "exact bond decimation", bool(dec < 1e-9), dec, 1e-9
