"""Basin classification, PPM rasters and inverse-iteration clouds of J(f)."""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, SizeGuard
from .rational_map import INFINITY, ComplexValue, MapParams, eval_map, f_array

BASIN0, BASIN1, UNDECIDED = "basin0", "basin1", "undecided"

# entry-time palettes, cycled by n; the exact RGB values are part of the output format
PALETTE_BASIN0 = np.array(
    [(8, 29, 88), (37, 52, 148), (34, 94, 168), (29, 145, 192), (65, 182, 196),
     (127, 205, 187), (199, 233, 180), (237, 248, 177)], dtype=np.uint8)
PALETTE_BASIN1 = np.array(
    [(128, 0, 38), (189, 0, 38), (227, 26, 28), (252, 78, 42), (253, 141, 60),
     (254, 178, 76), (254, 217, 118), (255, 237, 160)], dtype=np.uint8)
COLOR_UNDECIDED = np.array((0, 0, 0), dtype=np.uint8)


@dataclass(frozen=True)
class Classification:
    kind: str               # BASIN0, BASIN1 or UNDECIDED
    n: int | None = None    # first entry time into the eps-disk


@dataclass(frozen=True)
class RasterSpec:
    center: complex
    width: float
    pixels: int
    max_iter: int = 200
    eps: float = 1e-3

    def __post_init__(self):
        if self.pixels < 16:
            raise DomainError("pixels must be >= 16")
        if not 0 < self.eps < 0.1:
            raise DomainError("eps must lie in (0, 0.1)")
        if not self.width > 0:
            raise DomainError("width must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")

    @property
    def step(self) -> float:
        return self.width / self.pixels

    def grid(self) -> np.ndarray:
        """Pixel centres, row-major from the top-left corner."""
        c = complex(self.center)
        offs = (np.arange(self.pixels) + 0.5) * self.step - self.width / 2
        return (c.real + offs)[None, :] + 1j * (c.imag - offs)[:, None]

    def pixel_of(self, t: complex) -> tuple[int, int]:
        """(row, col) of the pixel containing t."""
        c = complex(self.center)
        col = math.floor((t.real - c.real + self.width / 2) / self.step)
        row = math.floor((c.imag + self.width / 2 - t.imag) / self.step)
        return row, col


def classify_point(p: MapParams, t: ComplexValue, max_iter: int = 200, eps: float = 1e-3) -> Classification:
    """Iterate until within eps of 0 or 1; a pass through infinity continues at 0."""
    z = t
    for n in range(max_iter + 1):
        if z is not INFINITY:
            if abs(z) < eps:
                return Classification(BASIN0, n)
            if abs(z - 1.0) < eps:
                return Classification(BASIN1, n)
        z = eval_map(p, z)
    return Classification(UNDECIDED)


def classify_array(b: int, t, max_iter: int = 200, eps: float = 1e-3):
    """Vectorised classify_point: (kind codes 0/1/-1, entry times, -1 if undecided)."""
    z = np.array(t, dtype=complex, copy=True)
    kind = np.full(z.shape, -1, dtype=np.int8)
    entry = np.full(z.shape, -1, dtype=np.int32)
    at_inf = np.zeros(z.shape, dtype=bool)
    active = np.ones(z.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for n in range(max_iter + 1):
            fin = active & ~at_inf
            hit0 = fin & (np.abs(z) < eps)
            hit1 = fin & ~hit0 & (np.abs(z - 1.0) < eps)
            kind[hit0], entry[hit0] = 0, n
            kind[hit1], entry[hit1] = 1, n
            active &= ~(hit0 | hit1)
            if not active.any():
                break
            u = z ** b
            pole = ~at_inf & ((np.abs(1.0 + u) <= 64 * np.finfo(float).eps * (1.0 + np.abs(u))) | ~np.isfinite(u))
            nxt = f_array(b, z)
            nxt = np.where(at_inf, 0.0, nxt)
            # |t| so large that t^b overflows: f(t) ~ 4 / t^b is zero in floats
            nxt = np.where(~at_inf & ~np.isfinite(u) & np.isfinite(z), 0.0, nxt)
            at_inf = pole & np.isfinite(u)
            z = np.where(at_inf, 0.0, nxt)
    return kind, entry


def raster_colors(kind: np.ndarray, entry: np.ndarray) -> np.ndarray:
    rgb = np.empty(kind.shape + (3,), dtype=np.uint8)
    rgb[...] = COLOR_UNDECIDED
    m0, m1 = kind == 0, kind == 1
    rgb[m0] = PALETTE_BASIN0[entry[m0] % len(PALETTE_BASIN0)]
    rgb[m1] = PALETTE_BASIN1[entry[m1] % len(PALETTE_BASIN1)]
    return rgb


def classify_raster(p: MapParams, spec: RasterSpec, jobs: int = 1):
    grid = spec.grid()
    if jobs <= 1:
        return classify_array(p.b, grid, spec.max_iter, spec.eps)
    chunks = np.array_split(np.arange(spec.pixels), jobs)
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(lambda rows: classify_array(p.b, grid[rows], spec.max_iter, spec.eps), chunks))
    return np.concatenate([k for k, _ in parts]), np.concatenate([e for _, e in parts])


def write_ppm(path, rgb: np.ndarray) -> None:
    h, w, _ = rgb.shape
    path = Path(path)
    try:
        with open(path, "wb") as fh:
            fh.write(b"P6\n%d %d\n255\n" % (w, h))
            fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())
    except OSError as exc:
        raise OSError(f"cannot write image to {path}: {exc}") from exc


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    magic, w, h, maxval, rest = data.split(maxsplit=4)
    if magic != b"P6" or int(maxval) != 255:
        raise ValueError(f"{path} is not an 8-bit P6 image")
    return np.frombuffer(rest, dtype=np.uint8).reshape(int(h), int(w), 3)


def render_raster(p: MapParams, spec: RasterSpec, out_path, jobs: int = 1) -> dict:
    """Write the classification image as binary PPM; returns pixel counts."""
    kind, entry = classify_raster(p, spec, jobs)
    write_ppm(out_path, raster_colors(kind, entry))
    return {
        BASIN0: int((kind == 0).sum()),
        BASIN1: int((kind == 1).sum()),
        UNDECIDED: int((kind == -1).sum()),
    }


def inverse_iteration_cloud(p: MapParams, N: int, seed: int = 0, burn_in: int = 20) -> np.ndarray:
    """Random backward orbit of t_c through all 2b preimages, after a burn-in.

    Each step picks one of the 2b preimages uniformly: first the u-root
    (inner or outer), then one of the b roots of it.
    """
    if not 0 <= N <= 10 ** 7:
        raise SizeGuard("N must lie in 0..10^7")
    b = p.b
    rng = np.random.Generator(np.random.Philox(key=int(seed) & ((1 << 64) - 1)))
    choice = rng.integers(0, 2 * b, size=N + burn_in)
    omega = [cmath.exp(2j * math.pi * j / b) for j in range(b)]
    inv_b = 1.0 / b
    x = complex(p.fixed_point.t_c)
    out = np.empty(N, dtype=complex)
    for i, c in enumerate(choice.tolist()):
        w = (1.0 + cmath.sqrt(1.0 - x)) ** 2
        u = x / w if c < b else w / x
        x = u ** inv_b * omega[c % b]
        if i >= burn_in:
            out[i - burn_in] = x
    return out
