"""Critical-exponent experiments along hyperbolic geodesics.

All experiments sample geodesics on a potential schedule g_k = g0 b^-k, so
that f maps the level-(k+1) point onto the level-k point of the shifted
angle and each level adds one renormalization step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .boettcher import geodesic_points, periodic_angle, periodic_boundary_point, check_word
from .errors import DomainError, NearIntegerResonance, SizeGuard, TruncationFailure, UnsupportedOrder
from .free_energy import DEFAULT_POLICY, TruncationPolicy, policy_for_potential, series_derivatives
from .jets import MAX_ORDER
from .rational_map import MapParams

MIN_FIT_POINTS = 6


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    rms_residual: float
    n_points: int
    predicted: float
    method: str         # "envelope", "plain" or "increment"


@dataclass(frozen=True)
class RadiusSchedule:
    b: int
    K: int
    g0: float = math.log(2.0)

    def __post_init__(self):
        if not 0 <= self.K <= 18:
            raise SizeGuard("K_levels must lie in 0..18")
        if not self.g0 > 0:
            raise DomainError("g0 must be positive")

    @property
    def potentials(self) -> np.ndarray:
        return self.g0 * float(self.b) ** -np.arange(self.K + 1, dtype=float)

    @property
    def one_minus_r(self) -> np.ndarray:
        return -np.expm1(-self.potentials)


@dataclass(frozen=True)
class NuPrediction:
    m: int
    alpha: float


def nu_exponent_prediction(p: MapParams, chi: float) -> NuPrediction:
    """m = [ln 2b / chi] + 1 and alpha = 1 - {ln 2b / chi}."""
    if not chi > 0:
        raise DomainError("chi must be positive")
    ratio = math.log(2 * p.b) / chi
    if abs(ratio - round(ratio)) < 1e-6:
        raise NearIntegerResonance(f"ln 2b / chi = {ratio!r} is within 1e-6 of an integer")
    whole = math.floor(ratio)
    return NuPrediction(whole + 1, 1.0 - (ratio - whole))


def fit_line(x, y, predicted: float, method: str) -> ExponentFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < MIN_FIT_POINTS:
        raise DomainError(f"need at least {MIN_FIT_POINTS} points, got {len(x)}")
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return ExponentFit(float(slope), float(intercept), rms, len(x), float(predicted), method)


def _derivative_along(p: MapParams, points: np.ndarray, potentials: np.ndarray, order: int,
                      policy: TruncationPolicy) -> np.ndarray:
    """|F^(order)| at each point; rows are levels.  NaN where the series fails."""
    out = np.full(points.shape, np.nan)
    for k, g in enumerate(potentials):
        pol = policy_for_potential(p, g, policy)
        row = points[k]
        good = np.isfinite(row)
        if not good.any():
            continue
        try:
            out[k, good] = np.abs(series_derivatives(p.b, row[good], order, pol)[order])
        except TruncationFailure:
            for j in np.flatnonzero(good):
                try:
                    out[k, j] = abs(series_derivatives(p.b, row[j], order, pol)[order])
                except TruncationFailure:
                    pass
    return out


def geodesic_schedule_points(p: MapParams, thetas, schedule: RadiusSchedule) -> np.ndarray:
    """Geodesic points, shape (K+1, len(thetas)); NaN where the pullback was ambiguous."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    rows = []
    for g in schedule.potentials:
        pts, ok = geodesic_points(p, thetas, float(g))
        rows.append(np.where(ok, pts, np.nan))
    return np.array(rows)


@dataclass
class AngleRecord:
    theta: float
    abs_Fpp: np.ndarray
    envelope: np.ndarray
    fit: ExponentFit | None


@dataclass
class ComplexExponentResult:
    schedule: RadiusSchedule
    angles: list[AngleRecord]
    predicted: float
    median_slope: float
    iqr: tuple[float, float]
    n_failed: int
    extra: dict = field(default_factory=dict)


def complex_exponent_experiment(p: MapParams, n_angles: int = 50, K_levels: int = 16, seed: int = 0,
                                g0: float = math.log(2.0),
                                policy: TruncationPolicy = DEFAULT_POLICY) -> ComplexExponentResult:
    """ln|F''| along random geodesics against -ln(1-r), fitted on its running maximum."""
    if n_angles < 1:
        raise DomainError("n_angles must be positive")
    sched = RadiusSchedule(p.b, K_levels, g0)
    thetas = _rng.uniforms(seed, n_angles)
    pts = geodesic_schedule_points(p, thetas, sched)
    vals = _derivative_along(p, pts, sched.potentials, 2, policy)
    x = -np.log(sched.one_minus_r)
    predicted = p.alpha_c
    records, slopes, failed = [], [], 0
    for j, th in enumerate(thetas):
        col = vals[:, j]
        if not np.all(np.isfinite(col)) or np.any(col == 0):
            failed += 1
            records.append(AngleRecord(float(th), col, np.full_like(col, np.nan), None))
            continue
        env = np.maximum.accumulate(np.log(col))
        fit = fit_line(x, env, predicted, "envelope")
        records.append(AngleRecord(float(th), col, env, fit))
        slopes.append(fit.slope)
    if not slopes:
        raise TruncationFailure("no angle produced a usable fit")
    q1, med, q3 = np.percentile(slopes, [25, 50, 75])
    return ComplexExponentResult(sched, records, predicted, float(med), (float(q1), float(q3)), failed)


@dataclass
class GeodesicExponentResult:
    fit: ExponentFit
    m: int
    chi: float
    lag: int
    schedule: RadiusSchedule
    points: np.ndarray
    distance: np.ndarray
    abs_derivative: np.ndarray


def _exponent_on_geodesic(p: MapParams, theta: float, target: complex, chi: float, lag: int,
                          K_levels: int, g0: float, policy: TruncationPolicy) -> GeodesicExponentResult:
    """Fit ln|F^(m)(t_{k+lag}) - F^(m)(t_k)| against -ln|t_k - target| on the tail.

    f^lag maps level k + lag onto level k, so consecutive samples sit at a
    fixed ratio of the local scaling; differencing at that lag cancels the
    analytic background of F^(m) to leading order.  The fit uses levels
    k >= K/2 (at least MIN_FIT_POINTS differences).
    """
    pred = nu_exponent_prediction(p, chi)
    if pred.m > MAX_ORDER:
        raise UnsupportedOrder(f"predicted derivative order {pred.m} exceeds {MAX_ORDER}")
    sched = RadiusSchedule(p.b, K_levels, g0)
    n_diff = K_levels + 1 - lag
    start = min(K_levels // 2, n_diff - MIN_FIT_POINTS)
    if start < 0:
        raise SizeGuard(f"K_levels={K_levels} too small for lag {lag}")
    pts = geodesic_schedule_points(p, [theta], sched)[:, 0]
    vals = np.full(len(pts), np.nan, dtype=complex)
    for k, g in enumerate(sched.potentials):
        if np.isfinite(pts[k]):
            pol = policy_for_potential(p, g, policy)
            vals[k] = series_derivatives(p.b, pts[k], pred.m, pol)[pred.m]
    dist = np.abs(pts - target)
    incr = np.abs(vals[lag:] - vals[:-lag])
    x, y = -np.log(dist[:-lag]), np.log(incr)
    sel = np.arange(n_diff) >= start
    sel &= np.isfinite(x) & np.isfinite(y)
    fit = fit_line(x[sel], y[sel], pred.alpha, "increment")
    return GeodesicExponentResult(fit, pred.m, chi, lag, sched, pts, dist, np.abs(vals))


def real_exponent_at_tc(p: MapParams, K_levels: int = 16, g0: float = math.log(2.0),
                        policy: TruncationPolicy = DEFAULT_POLICY) -> GeodesicExponentResult:
    """Growth of F^(m) on (0, t_c) against -ln(t_c - t); m and alpha from chi = ln f'(t_c)."""
    fp = p.fixed_point
    return _exponent_on_geodesic(p, 0.0, complex(fp.t_c), math.log(fp.multiplier), 1, K_levels, g0, policy)


def periodic_exponent_experiment(p: MapParams, word, K_levels: int = 16, g0: float = math.log(2.0),
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> GeodesicExponentResult:
    """Same fit on the geodesic landing at the periodic point coded by ``word``.

    The abscissa is -ln|t - t*| with t* the periodic landing point, the
    analogue of t_c - t for the real geodesic.
    """
    word = check_word(word, p.b)
    if len(word) > 8:
        raise SizeGuard("word length must be <= 8")
    pp = periodic_boundary_point(p, word)
    return _exponent_on_geodesic(p, periodic_angle(word, p.b), pp.point, pp.chi, len(word), K_levels, g0, policy)
