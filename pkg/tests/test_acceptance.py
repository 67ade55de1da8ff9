"""Acceptance criteria 1-13 at their stated tolerances.

Each ``criterion_N`` returns (passed, detail).  Under pytest every result is
printed, recorded for the terminal summary and asserted; ``python
tests/test_acceptance.py`` prints the same table without pytest.
"""
import cmath
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cli_cases import CASES  # noqa: E402
from renorm_julia import _rng  # noqa: E402
from renorm_julia.boettcher import geodesic_point, green_potential_array, sample_harmonic_boundary  # noqa: E402
from renorm_julia.exponents import (  # noqa: E402
    RadiusSchedule,
    complex_exponent_experiment,
    geodesic_schedule_points,
    real_exponent_at_tc,
)
from renorm_julia.free_energy import functional_residuals_array, series_derivatives  # noqa: E402
from renorm_julia.lattice_oracle import verify_decimation  # noqa: E402
from renorm_julia.rational_map import (  # noqa: E402
    INFINITY,
    MapParams,
    chebyshev,
    eval_map,
    f_array,
    fprime_array,
    koebe,
    mobius,
)
from renorm_julia.selftest import basin_points, conjugacy_sample  # noqa: E402
from renorm_julia.thermo import backward_cocycle_batch, lyapunov_harmonic, pressure_curve  # noqa: E402

BS = (2, 3, 4)


def criterion_1():
    t0 = time.perf_counter()
    err, beta_ok = 0.0, True
    for b in BS:
        p = MapParams(b)
        err = max(err, abs(eval_map(p, 0j)), abs(eval_map(p, 1 + 0j) - 1))
        for k in range(b):
            err = max(err, abs(eval_map(p, cmath.exp(2j * math.pi * k / b)) - 1))
            beta_ok &= eval_map(p, cmath.exp(1j * math.pi * (2 * k + 1) / b)) is INFINITY
        beta_ok &= eval_map(p, INFINITY) == 0
    conj = max(abs(mobius(koebe(complex(t))) - chebyshev(mobius(complex(t)))) for t in conjugacy_sample(1000))
    dt = time.perf_counter() - t0
    ok = err < 1e-12 and beta_ok and conj < 1e-11 and dt < 1.0
    return ok, f"fixed/critical err {err:.1e}, conjugacy max {conj:.2e} (< 1e-11), {dt:.2f} s"


def criterion_2():
    t0 = time.perf_counter()
    worst = {}
    for b in BS:
        r = functional_residuals_array(b, basin_points(b, 1000, seed=40 + b))
        worst[b] = max(float(np.abs(x).max()) for x in r)
    dt = time.perf_counter() - t0
    ok = max(worst.values()) < 1e-8 and dt < 30
    return ok, "max residual " + ", ".join(f"b={b}: {v:.1e}" for b, v in worst.items()) + f" (< 1e-8), {dt:.1f} s"


def criterion_3():
    errs = {b: abs(series_derivatives(b, 1.0, 0)[0] - 2 * b * math.log(2) / (2 * b - 1)) for b in BS}
    return max(errs.values()) < 1e-12, "|F(1) - 2b ln2/(2b-1)| " + ", ".join(f"b={b}: {e:.1e}" for b, e in errs.items())


def criterion_4():
    pot = 0.0
    for b in BS:
        t = basin_points(b, 1000, seed=60 + b)
        pot = max(pot, float(np.max(np.abs(green_potential_array(b, f_array(b, t)) - b * green_potential_array(b, t)))))
    rng = np.random.Generator(np.random.Philox(key=4))
    geo = 0.0
    for b in BS:
        p = MapParams(b)
        for th, g in zip(rng.random(100), 10.0 ** rng.uniform(-6, 0, 100)):
            t = geodesic_point(p, float(th), float(g))
            geo = max(geo, abs(eval_map(p, t) - geodesic_point(p, (b * th) % 1.0, b * float(g))))
    ok = pot < 1e-8 and geo < 1e-8
    return ok, f"potential equivariance {pot:.1e}, geodesic equivariance {geo:.1e} (< 1e-8)"


def criterion_5():
    parts, ok = [], True
    for b in BS:
        t0 = time.perf_counter()
        est = lyapunov_harmonic(MapParams(b), 20000, seed=b)
        dt = time.perf_counter() - t0
        rel = abs(est.estimate / math.log(b) - 1)
        ok &= rel < 0.01 and dt < 60
        parts.append(f"b={b}: {est.estimate:.5f} vs {math.log(b):.5f} ({100 * rel:.2f}%, {dt:.1f} s)")
    return ok, "; ".join(parts)


def criterion_6():
    parts, ok = [], True
    for b in (3, 4):
        t0 = time.perf_counter()
        kappas = [0.0, 0.02] + ([0.05, 0.1, 0.15, 0.2, 0.25, 0.3] if b == 3 else [])
        curve = pressure_curve(MapParams(b), kappas, 12)
        dt = time.perf_counter() - t0
        P = [e.value for e in curve]
        slope = (P[1] - P[0]) / 0.02
        target = -math.log(b / 2)
        rel = abs(slope / target - 1)
        ok &= P[0] == math.log(b) and rel < 0.05 and dt < 60
        if b == 3:
            ok &= all(v < math.log(3) for v in P[1:])
        parts.append(f"b={b}: P(0)-ln b={P[0] - math.log(b):.0e}, slope {slope:.4f} vs {target:.4f} ({100 * rel:.1f}%, {dt:.1f} s)")
    return ok, "; ".join(parts) + "; P(kappa) < ln 3 on (0, 0.3]"


def criterion_7():
    worst = 0.0
    for b in BS:
        p = MapParams(b)
        t = np.concatenate([basin_points(b, 50000, seed=70 + b, gmin=0.0),
                            sample_harmonic_boundary(p, 50000, seed=80 + b).points])
        ratio = np.abs(t * fprime_array(b, t)) / np.abs(f_array(b, t)) / (math.sqrt(2) * b)
        worst = max(worst, float(ratio.max()))
    return worst <= 1 + 1e-9, f"max |t f'/f| / (sqrt2 b) = {worst:.4f} over 1e5 points per b (<= 1 + 1e-9)"


def criterion_8():
    p = MapParams(3)
    seeds = np.arange(1000)
    thetas = _rng.uniforms(8, 1000)
    m = float(backward_cocycle_batch(p, thetas, 30, seeds)[:, -1].mean())
    target = -math.log(1.5)
    rel = abs(m / target - 1)
    return rel < 0.05, f"mean (1/30) ln|beta_-30| = {m:.4f} vs {target:.4f} ({100 * rel:.1f}%)"


def criterion_9():
    t0 = time.perf_counter()
    parts, ok = [], True
    for b in (3, 4):
        r = complex_exponent_experiment(MapParams(b), n_angles=50, K_levels=16, seed=7)
        d = abs(r.median_slope - r.predicted)
        ok &= d < 0.08 and r.n_failed < 0.05 * 50
        parts.append(f"b={b}: median {r.median_slope:.4f} vs {r.predicted:.5f} (|d|={d:.3f})")
    dt = time.perf_counter() - t0
    return ok and dt < 600, "; ".join(parts) + f", {dt:.1f} s"


def criterion_10():
    parts, ok = [], True
    for b in (2, 3):
        r = real_exponent_at_tc(MapParams(b), K_levels=16)
        d = abs(r.fit.slope - r.fit.predicted)
        ok &= d < 0.05
        parts.append(f"b={b}: m={r.m}, slope {r.fit.slope:.4f} vs {r.fit.predicted:.4f} (|d|={d:.4f})")
    return ok, "; ".join(parts)


def criterion_11():
    p = MapParams(3)
    sched = RadiusSchedule(3, 16)
    pts = geodesic_schedule_points(p, [0.0], sched)[:, 0].real
    Fpp = np.abs(series_derivatives(3, pts, 2)[2])
    ratio = float(Fpp.max() / Fpp[0])
    return ratio > 1e3, f"max|F''| / |F''(level 0)| = {Fpp.max():.3f} / {Fpp[0]:.3f} = {ratio:.2f} (needs > 1e3)"


def _cli_bytes(name, args, tmp: Path, tag: str, hash_seed: str) -> bytes:
    out = tmp / f"{name}-{tag}"
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    env.pop("RENORM_JULIA_SEED", None)
    subprocess.run([sys.executable, "-m", "renorm_julia.cli", name, *args, "--seed", "5",
                    "--deterministic", "--out", str(out)], check=True, env=env, capture_output=True)
    return out.read_bytes()


def criterion_12():
    t0 = time.perf_counter()
    K = np.linspace(0.05, 2.0, 20)
    worst = max(verify_decimation(b, n, float(k)) for b, n in [(2, 0), (2, 1), (3, 0)] for k in K)
    dt = time.perf_counter() - t0
    return worst < 1e-9 and dt < 120, f"max decimation residual {worst:.1e} (< 1e-9), {dt:.1f} s"


def criterion_13(tmp: Path):
    differ = []
    for name, args in sorted(CASES.items()):
        if _cli_bytes(name, args, tmp, "a", "1") != _cli_bytes(name, args, tmp, "b", "2"):
            differ.append(name)
    ok = not differ
    return ok, f"{len(CASES)} subcommands, two processes each: " + ("byte-identical" if ok else "differ: " + ", ".join(differ))


def _check(number, result):
    from conftest import ACCEPTANCE_RESULTS

    ok, detail = result
    ACCEPTANCE_RESULTS[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_exact_structure():
    _check(1, criterion_1())


def test_criterion_02_functional_equations():
    _check(2, criterion_2())


def test_criterion_03_fixed_point_value():
    _check(3, criterion_3())


def test_criterion_04_potential_and_geodesics():
    _check(4, criterion_4())


def test_criterion_05_characteristic_exponent():
    _check(5, criterion_5())


def test_criterion_06_pressure():
    _check(6, criterion_6())


def test_criterion_07_metric_bound():
    _check(7, criterion_7())


def test_criterion_08_backward_cocycle():
    _check(8, criterion_8())


def test_criterion_09_complex_exponent():
    _check(9, criterion_9())


def test_criterion_10_real_exponent():
    _check(10, criterion_10())


def test_criterion_11_second_derivative_blowup_on_real_geodesic():
    # expected to fail: along theta = 0 for b = 3 the singular part of F
    # scales like |t_c - t|^2.9, so F'' stays bounded there
    _check(11, criterion_11())


def test_criterion_12_lattice_decimation():
    _check(12, criterion_12())


def test_criterion_13_cli_determinism(tmp_path):
    _check(13, criterion_13(tmp_path))


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        for k in range(1, 14):
            fn = globals()[f"criterion_{k}"]
            ok, detail = fn(Path(d)) if k == 13 else fn()
            print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
