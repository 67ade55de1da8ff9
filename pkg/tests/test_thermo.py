import math

import numpy as np
import pytest

from renorm_julia.errors import DomainError, SizeGuard
from renorm_julia.rational_map import MapParams, eval_map, fprime_array
from renorm_julia.thermo import (
    backward_cocycle_batch,
    backward_cocycle_sample,
    birkhoff_sum,
    cylinder_distortion,
    default_burn_in,
    log_abs_beta,
    lyapunov_harmonic,
    lyndon_words,
    pressure_curve,
    pressure_estimate,
    spectral_radius_estimate,
)

# max/min Gibbs-ratio spread over depth-8 cylinders at kappa = 1 (b = 3 measured 26.37)
DISTORTION_BOUND_B3 = 30.0


def test_birkhoff_examples():
    p = MapParams(3)
    assert birkhoff_sum(p, lambda t: 2.5, 0.3, 7) == pytest.approx(17.5)
    tc = p.fixed_point.t_c
    lnfp = lambda t: math.log(abs(fprime_array(3, t)))
    assert birkhoff_sum(p, lnfp, tc, 5) == pytest.approx(5 * math.log(p.fixed_point.multiplier), rel=1e-12)


def test_birkhoff_additivity():
    p = MapParams(2)
    rho = lambda t: math.log(abs(fprime_array(2, t)))
    t = 0.3 + 0.2j
    z = t
    for _ in range(3):
        z = eval_map(p, z)
    assert abs(birkhoff_sum(p, rho, t, 7) - birkhoff_sum(p, rho, t, 3) - birkhoff_sum(p, rho, z, 4)) < 1e-10


def test_log_abs_beta_at_tc(params):
    tc = params.fixed_point
    assert log_abs_beta(params.b, tc.t_c) == pytest.approx(2 * math.log(tc.multiplier) - math.log(2 * params.b))


def test_lyapunov_small_sample():
    est = lyapunov_harmonic(MapParams(3), 2000, seed=3)
    assert abs(est.estimate - math.log(3)) < 3 * est.stderr + 1e-3
    assert est.n_samples == 2000
    with pytest.raises(DomainError):
        lyapunov_harmonic(MapParams(3), 10)


def test_pressure_at_zero_is_ln_b(params):
    for n in (1, 4, 7):
        est = pressure_estimate(params, 0.0, n)
        assert est.value == pytest.approx(math.log(params.b), abs=1e-14)
        assert est.support_size == params.b ** n


def test_pressure_burn_in_bounds():
    p = MapParams(3)
    assert default_burn_in(12) == 4
    with pytest.raises(DomainError):
        pressure_curve(p, [0.1], 5, burn_in=5)
    with pytest.raises(SizeGuard):
        pressure_curve(p, [0.1], 15)


def test_pressure_frozen_depth10():
    vals = [e.value for e in pressure_curve(MapParams(3), [0.1, 0.3, 1.0], 10)]
    np.testing.assert_allclose(vals, [1.0582599904374252, 0.9839052797754418, 0.8223585211312406], rtol=1e-10)


def test_pressure_convex_nonincreasing():
    p = MapParams(3)
    ks = np.linspace(0, 1, 21)
    v = np.array([e.value for e in pressure_curve(p, ks, 9)])
    assert np.all(np.diff(v) <= 1e-12)
    assert np.all(v[2:] - 2 * v[1:-1] + v[:-2] >= -1e-9)


def test_pressure_literal_estimator_still_available():
    p = MapParams(3)
    a = pressure_estimate(p, 0.5, 6, burn_in=0).value
    b = pressure_estimate(p, 0.5, 6).value
    assert a != b and a < math.log(3)


def test_cylinder_distortion_bounded():
    p = MapParams(3)
    vals = [cylinder_distortion(p, n) for n in (4, 6, 8)]
    assert max(vals) <= DISTORTION_BOUND_B3
    assert vals[2] / vals[1] < 1.1


def test_lyndon_words():
    ws = list(lyndon_words(2, 4))
    assert ws == [(0,), (0, 0, 0, 1), (0, 0, 1), (0, 0, 1, 1), (0, 1), (0, 1, 1), (0, 1, 1, 1), (1,)]
    # necklace count: sum over q <= 6 of Lyndon words of length q over 3 letters
    assert len(list(lyndon_words(3, 6))) == 3 + 3 + 8 + 18 + 48 + 116


def test_spectral_radius_bound(params):
    fp = params.fixed_point
    r1 = spectral_radius_estimate(params, 1)
    assert r1.value >= 2 * math.log(fp.multiplier) - math.log(2 * params.b) - 1e-12
    r6 = spectral_radius_estimate(params, 6)
    assert r6.value >= r1.value
    if params.b >= 3:
        assert r6.value > 0
        assert r6.value >= 0.98 * math.log(params.b / 2)
    with pytest.raises(SizeGuard):
        spectral_radius_estimate(params, 13)


def test_spectral_radius_frozen_b3():
    r = spectral_radius_estimate(MapParams(3), 10)
    assert r.value == pytest.approx(0.7793691314522997, rel=1e-10)
    assert r.best_word == (1,) and r.n_skipped == 0


def test_backward_means():
    th = np.linspace(0, 1, 200, endpoint=False)
    m3 = backward_cocycle_batch(MapParams(3), th, 30, np.arange(200))[:, -1].mean()
    assert abs(m3 / -math.log(1.5) - 1) < 0.05
    m2 = backward_cocycle_batch(MapParams(2), th, 30, np.arange(200))[:, -1].mean()
    assert abs(m2) < 0.05


def test_backward_sample_consistency():
    p = MapParams(3)
    s = backward_cocycle_sample(p, 0.3, 40, seed=2)
    assert len(s.digits) == 40 and all(0 <= d < 3 for d in s.digits)
    # each step is an inverse branch of the previous point
    assert abs(eval_map(p, s.points[1]) - s.points[0]) < 1e-9
    batch = backward_cocycle_batch(p, [0.3], 40, [2])[0]
    np.testing.assert_allclose(batch, s.mean_log_beta, rtol=1e-12)
    gaps = np.abs(s.G_partial[10:] - s.G_partial[:-10])[::10]
    assert np.all(np.diff(gaps) < 0)
    assert backward_cocycle_sample(p, 0.3, 40, seed=2).digits == s.digits
