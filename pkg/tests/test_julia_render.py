import cmath
import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from renorm_julia.errors import DomainError, SizeGuard
from renorm_julia.julia_render import (
    BASIN0,
    BASIN1,
    Classification,
    COLOR_UNDECIDED,
    PALETTE_BASIN0,
    PALETTE_BASIN1,
    UNDECIDED,
    RasterSpec,
    classify_array,
    classify_point,
    classify_raster,
    inverse_iteration_cloud,
    read_ppm,
    render_raster,
)
from renorm_julia.rational_map import MapParams, eval_map, f_array

# fraction of undecided pixels allowed at 512px, width 3, max_iter 200, eps 1e-3 (measured: 0 for b = 2, 3, 4)
UNDECIDED_LIMIT = 0.05


def test_point_examples():
    p = MapParams(3)
    c = classify_point(p, 0.01)
    assert c.kind == BASIN0 and c.n <= 2
    root = cmath.exp(1j * math.pi / 3)
    assert classify_point(p, root) == Classification(BASIN0, 2)
    assert classify_point(p, p.fixed_point.t_c, max_iter=500).kind == UNDECIDED
    assert classify_point(p, 1.0).kind == BASIN1
    assert classify_point(p, 0.9).kind == BASIN1
    # f(1/t) = f(t)
    assert classify_point(p, 3.0) == classify_point(p, 1 / 3)


def test_array_matches_scalar(params, rng):
    t = rng.uniform(-1.5, 1.5, 400) + 1j * rng.uniform(-1.5, 1.5, 400)
    kind, entry = classify_array(params.b, t, 100)
    code = {BASIN0: 0, BASIN1: 1, UNDECIDED: -1}
    for z, k, n in zip(t, kind, entry):
        c = classify_point(params, complex(z), 100)
        assert code[c.kind] == k
        if c.n is not None:
            assert c.n == n


def test_invariance_under_f(params, rng):
    t = rng.uniform(-1.5, 1.5, 10_000) + 1j * rng.uniform(-1.5, 1.5, 10_000)
    k0, e0 = classify_array(params.b, t)
    k1, e1 = classify_array(params.b, f_array(params.b, t))
    use = (k0 >= 0) & (e0 > 0) & np.isfinite(f_array(params.b, t))
    agree = (k0[use] == k1[use]) & (e1[use] == e0[use] - 1)
    assert agree.mean() >= 0.999


def test_conjugation_symmetry(params, rng):
    t = rng.uniform(-1.5, 1.5, 2000) + 1j * rng.uniform(-1.5, 1.5, 2000)
    a = classify_array(params.b, t)
    b = classify_array(params.b, t.conj())
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_raster_spec():
    s = RasterSpec(0j, 3.0, 256)
    g = s.grid()
    assert g.shape == (256, 256)
    assert g[0, 0].real < 0 < g[0, 0].imag
    assert s.pixel_of(g[17, 200]) == (17, 200)
    with pytest.raises(DomainError):
        RasterSpec(0j, 3.0, 8)
    with pytest.raises(DomainError):
        RasterSpec(0j, 3.0, 64, eps=0.2)


def test_render_b3(tmp_path):
    spec = RasterSpec(0j, 3.0, 256)
    out = tmp_path / "j3.ppm"
    counts = render_raster(MapParams(3), spec, out)
    img = read_ppm(out)
    assert img.shape == (256, 256, 3) and sum(counts.values()) == 256 ** 2
    r0, c0 = spec.pixel_of(0j)
    r1, c1 = spec.pixel_of(1 + 0j)
    assert any((img[r0, c0] == col).all() for col in PALETTE_BASIN0)
    assert any((img[r1, c1] == col).all() for col in PALETTE_BASIN1)
    assert out.read_bytes().startswith(b"P6\n256 256\n255\n")


def test_render_depends_on_b(tmp_path):
    spec = RasterSpec(0j, 3.0, 64)
    render_raster(MapParams(2), spec, tmp_path / "a.ppm")
    render_raster(MapParams(3), spec, tmp_path / "b.ppm")
    assert (tmp_path / "a.ppm").read_bytes() != (tmp_path / "b.ppm").read_bytes()


def test_parallel_rows_identical():
    spec = RasterSpec(0.1 + 0.2j, 2.0, 96)
    a = classify_raster(MapParams(4), spec, jobs=1)
    b = classify_raster(MapParams(4), spec, jobs=4)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_undecided_fraction(params):
    kind, _ = classify_raster(params, RasterSpec(0j, 3.0, 512))
    assert (kind == -1).mean() < UNDECIDED_LIMIT


def test_undecided_colour_is_black():
    assert tuple(COLOR_UNDECIDED) == (0, 0, 0)


def test_cloud_is_backward_orbit(params):
    x = inverse_iteration_cloud(params, 500, seed=3)
    for k in range(499):
        assert abs(eval_map(params, x[k + 1]) - x[k]) < 1e-8 * max(1.0, abs(x[k]))
    first = inverse_iteration_cloud(params, 1, seed=3, burn_in=0)[0]
    assert abs(eval_map(params, first) - params.fixed_point.t_c) < 1e-12


def test_cloud_points_on_julia_set(params):
    x = inverse_iteration_cloud(params, 2000, seed=4)[::20]
    kinds = {classify_point(params, complex(z), max_iter=20).kind for z in x}
    assert kinds == {UNDECIDED}


def test_cloud_deterministic_and_guarded():
    p = MapParams(3)
    np.testing.assert_array_equal(inverse_iteration_cloud(p, 100, seed=9), inverse_iteration_cloud(p, 100, seed=9))
    with pytest.raises(SizeGuard):
        inverse_iteration_cloud(p, 10 ** 8)


def test_cloud_conjugation_symmetric_b2():
    c = inverse_iteration_cloud(MapParams(2), 20000, seed=1)
    assert abs((c.imag > 0).mean() - 0.5) < 0.02
    tree = cKDTree(np.c_[c.real, c.imag])
    d, _ = tree.query(np.c_[c.real, -c.imag])
    assert np.median(d) < 0.005
