"""Thermodynamic formalism on the boundary of the basin of 0.

Cylinders of the b-adic coding are represented by preimages of t_c; all
cocycles are accumulated as logarithms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from . import _rng
from .boettcher import (
    _select_branch,
    geodesic_points,
    iter_tree_levels,
    periodic_points_batch,
    sample_harmonic_boundary,
)
from .errors import DomainError, SizeGuard
from .free_energy import DEFAULT_POLICY, TruncationPolicy, cocycle_source
from .rational_map import INFINITY, MapParams, eval_map, fprime_array, preimage_u_roots


def log_abs_beta(b: int, t) -> np.ndarray:
    """ln|beta(t)| with beta = f'(t)^2 / 2b."""
    return 2.0 * np.log(np.abs(fprime_array(b, t))) - math.log(2 * b)


def birkhoff_sum(p: MapParams, rho: Callable, t, n: int):
    """sum_{k=0}^{n-1} rho(f^k t) (half-open: n terms)."""
    total = 0
    z = t
    for _ in range(n):
        if z is INFINITY:
            raise ZeroDivisionError("orbit reached infinity")
        total = total + rho(z)
        z = eval_map(p, z)
    return total


@dataclass(frozen=True)
class LyapunovEstimate:
    estimate: float
    stderr: float
    n_samples: int
    n_failed: int


def lyapunov_harmonic(p: MapParams, M: int = 20000, g_small: float = 1e-8, seed: int = 0) -> LyapunovEstimate:
    """Harmonic-measure average of ln|f'| over sampled landing points."""
    if M < 100:
        raise DomainError("M must be >= 100")
    sample = sample_harmonic_boundary(p, M, g_small, seed)
    v = np.log(np.abs(fprime_array(p.b, sample.points)))
    return LyapunovEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v))), len(v), sample.n_failed)


# ---------------------------------------------------------------------------
# pressure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PressureEstimate:
    kappa: float
    depth: int
    value: float
    support_size: int


def _leaf_cocycles(p: MapParams, n: int, block_depth: int = 9, burn_in: int = 0) -> np.ndarray:
    """ln|beta| summed along the orbit of every depth-n preimage y of t_c, in
    angle order.  Only the factors at f^k y, k < n - burn_in, are kept, so the
    last ``burn_in`` steps (which run through the top of the tree) are dropped.

    The tree is expanded breadth-first to depth n - block_depth and then one
    subtree batch at a time, so memory stays bounded at depth 14.
    """
    b = p.b
    top = max(0, n - block_depth)
    S_top = np.zeros(1)
    for depth, x_top, L_top, th_top in iter_tree_levels(p, top):
        if depth:
            S_top = np.tile(S_top, b) + (log_abs_beta(b, x_top) if depth > burn_in else 0.0)
    out = []
    batch = max(1, (1 << 20) // b ** (n - top))
    for s0 in range(0, len(x_top), batch):
        xs = x_top[s0:s0 + batch]
        Ls = L_top[s0:s0 + batch]
        ths = th_top[s0:s0 + batch]
        Ss = S_top[s0:s0 + batch]
        for depth in range(top + 1, n + 1):
            xs, Ls, ths = _expand(b, xs, Ls, ths)
            Ss = np.tile(Ss, b) + (log_abs_beta(b, xs) if depth > burn_in else 0.0)
        out.append(Ss)
    return np.concatenate(out)


def _expand(b: int, x, L, theta):
    """One tree level, digit-major, mirroring iter_tree_levels."""
    omega = np.exp(2j * np.pi * np.arange(b) / b)
    inner, _ = preimage_u_roots(x)
    L_new = -(2.0 / b) * np.log1p(inner) + L / b
    cand = (inner ** (1.0 / b))[:, None] * omega[None, :]
    ang = np.mod((np.angle(cand) + L_new.imag[:, None]) / (2 * math.pi), 1.0)
    want = (theta[:, None] + np.arange(b)[None, :]) / b
    d = np.mod(ang[:, :, None] - want[:, None, :], 1.0)
    d = np.minimum(d, 1.0 - d)
    inv = np.argsort(np.argmin(d, axis=2), axis=1)
    cand = cand[np.arange(len(x))[:, None], inv]
    return cand.T.reshape(-1), np.tile(L_new, b), want.T.reshape(-1)


def default_burn_in(depth: int) -> int:
    return depth // 3


def pressure_curve(p: MapParams, kappas, depth: int, burn_in: int | None = None) -> list[PressureEstimate]:
    """Finite-depth pressure of -kappa ln|beta| over the b^n depth-n preimages of t_c.

    Each cylinder of length n - m (m = ``burn_in``) is represented by its b^m
    extensions to depth n, and only the first n - m cocycle factors are used:

        P(kappa) = ln b + 1/(n-m) ln mean_y |beta_{n-m}(y)|^-kappa

    The first tree levels below t_c are far from equidistributed, and keeping
    them biases the kappa-slope by O(1/n); m = n // 3 removes most of that.
    m = 0 is the plain (1/n) ln sum over the tree.  P(0) = ln b exactly.
    """
    if not 1 <= depth <= 14:
        raise SizeGuard("depth must be in 1..14")
    m = default_burn_in(depth) if burn_in is None else int(burn_in)
    if not 0 <= m < depth:
        raise DomainError("burn_in must lie in 0..depth-1")
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    if np.any(kappas < 0):
        raise DomainError("kappa must be >= 0")
    S = _leaf_cocycles(p, depth, burn_in=m)
    ln_b = math.log(p.b)
    out = []
    for k in kappas:
        # the mean is exactly 1 at k = 0
        lme = 0.0 if k == 0 else float(logsumexp(-k * S) - math.log(len(S)))
        out.append(PressureEstimate(float(k), depth, ln_b + lme / (depth - m), len(S)))
    return out


def pressure_estimate(p: MapParams, kappa: float, depth: int, burn_in: int | None = None) -> PressureEstimate:
    return pressure_curve(p, [kappa], depth, burn_in)[0]


def cylinder_distortion(p: MapParams, depth: int, kappa: float = 1.0) -> float:
    """max/min over depth-n cylinders of the Gibbs-weight ratio between the two
    depth-(n+1) representatives that refine the same cylinder's endpoints.

    Representatives are the depth-(n+1) preimages of t_c extending each word
    with last digit 0 and b-1; both lie in the same depth-n cylinder and only
    the first n cocycle factors enter.
    """
    b = p.b
    S = _leaf_cocycles(p, depth + 1, block_depth=max(9, depth + 1))
    first = next(x for d, x, _, _ in iter_tree_levels(p, 1) if d == 1)
    # rows: depth-n cylinders; columns: appended last digit
    S = S.reshape(-1, b) - log_abs_beta(b, first)[None, :]
    spread = S[:, -1] - S[:, 0]
    return float(math.exp(kappa * (spread.max() - spread.min())))


# ---------------------------------------------------------------------------
# periodic measures
# ---------------------------------------------------------------------------

def lyndon_words(b: int, max_len: int):
    """Lyndon words over 0..b-1 of length <= max_len (Duval's algorithm)."""
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == b - 1:
            w.pop()


@dataclass(frozen=True)
class SpectralRadiusBound:
    value: float
    best_word: tuple
    n_words: int
    n_skipped: int


def spectral_radius_estimate(p: MapParams, max_period: int) -> SpectralRadiusBound:
    """Lower bound for ln r_beta: max over periodic cycles of 2 chi - ln 2b."""
    if not 1 <= max_period <= 12:
        raise SizeGuard("max_period must be in 1..12")
    words = list(lyndon_words(p.b, max_period))
    best, best_word, skipped = -math.inf, None, 0
    ln2b = math.log(2 * p.b)
    for q in range(1, max_period + 1):
        group = [w for w in words if len(w) == q]
        if not group:
            continue
        _, chi, ok, _ = periodic_points_batch(p, np.array(group))
        skipped += int((~ok).sum())
        vals = np.where(ok, 2.0 * chi - ln2b, -np.inf)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_word = float(vals[i]), group[i]
    return SpectralRadiusBound(best, best_word, len(words), skipped)


# ---------------------------------------------------------------------------
# backward orbits (natural extension)
# ---------------------------------------------------------------------------

@dataclass
class BackwardSample:
    digits: tuple
    points: np.ndarray          # t_{-1}, ..., t_{-n}
    mean_log_beta: np.ndarray   # (1/k) ln|beta_{-k}|, k = 1..n
    G_partial: np.ndarray | None = None   # G_k = -sum_{i<=k} beta_{-i} h(t_{-i})


def _backward_walk(p: MapParams, start, digits: np.ndarray, L0):
    """Apply inverse branches chosen by ``digits`` (one row per walk)."""
    b = p.b
    W, n = digits.shape
    omega = np.exp(2j * np.pi * np.arange(b) / b)
    x = np.asarray(start, dtype=complex).copy()
    L = np.asarray(L0, dtype=complex).copy()
    theta = np.mod((np.angle(x) + L.imag) / (2 * math.pi), 1.0)
    pts = np.empty((W, n), dtype=complex)
    for k in range(n):
        target = (theta + digits[:, k]) / b
        x, L, _, _ = _select_branch(b, x, L, target, omega)
        theta = target
        pts[:, k] = x
    return pts


def backward_cocycle_batch(p: MapParams, theta_starts, n: int, seeds, g_small: float = 1e-8) -> np.ndarray:
    """(1/k) ln|beta_{-k}| for many seeded backward orbits; shape (W, n)."""
    if not 1 <= n <= 200:
        raise DomainError("n must be in 1..200")
    seeds = np.atleast_1d(seeds)
    theta_starts = np.broadcast_to(np.asarray(theta_starts, dtype=float), seeds.shape)
    start, ok, L0 = geodesic_points(p, theta_starts, g_small, return_log=True)
    digits = np.array([_rng.digit_stream(int(s), 0, p.b, n) for s in seeds])
    pts = _backward_walk(p, start, digits, L0)
    cum = -np.cumsum(log_abs_beta(p.b, pts), axis=1)
    return cum / np.arange(1, n + 1)


def backward_cocycle_sample(p: MapParams, theta_start: float, n: int, seed: int,
                            g_small: float = 1e-8, with_G: bool = True,
                            policy: TruncationPolicy = DEFAULT_POLICY) -> BackwardSample:
    """One seeded backward orbit from the landing point at theta_start."""
    if not 1 <= n <= 200:
        raise DomainError("n must be in 1..200")
    start, ok, L0 = geodesic_points(p, [theta_start], g_small, return_log=True)
    digits = _rng.digit_stream(seed, 0, p.b, n)[None, :]
    pts = _backward_walk(p, start, digits, L0)[0]
    lb = log_abs_beta(p.b, pts)
    mean = -np.cumsum(lb) / np.arange(1, n + 1)
    G = None
    if with_G:
        fp = fprime_array(p.b, pts)
        log_beta_c = np.log(fp ** 2 / (2 * p.b))
        # complex beta_{-k} = 1 / prod_{i<=k} beta(t_{-i})
        beta_minus = np.exp(-np.cumsum(log_beta_c))
        wide = TruncationPolicy(policy.tol, max(policy.max_terms, 2000), policy.stop_radius)
        h = cocycle_source(p.b, pts, wide)
        G = -np.cumsum(beta_minus * h)
    return BackwardSample(tuple(int(d) for d in digits[0]), pts, mean, G)
