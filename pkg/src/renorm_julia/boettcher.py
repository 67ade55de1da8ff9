"""Green potential, Böttcher coordinate and geodesic pullback in the basin of 0.

On the immediate basin the map is conjugate to z -> z^b by

    psi(t) = c t prod_{n>=0} (1 + f^n(t)^b)^(-2 / b^(n+1)),   c^(b-1) = 4.

Every orbit point of a basin point stays in the open unit disk, so
1 + f^n(t)^b has positive real part and principal logarithms are exact.
We carry ``L(t) = log(psi(t) / (c t))`` through inverse branches using

    L(s) = -(2/b) Log(1 + s^b) + L(f(s)) / b,

which gives arg psi of every candidate preimage without re-iterating.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _rng
from .errors import BranchAmbiguity, BranchWarning, DomainError, NonContraction, SizeGuard, Undecided
from .jets import Jet
from .rational_map import INFINITY, MapParams, f_array, f_jet, fprime_array, preimage_u_roots

DEEP_SEED_POTENTIAL = 18.0
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

def shifted_angle(theta: float, b: int, k: int) -> float:
    """b^k theta mod 1, exact for the float theta before the final rounding."""
    num, den = float(theta).as_integer_ratio()
    return (num * b ** k % den) / den


def word_angle(word, b: int) -> float:
    """sum eps_k b^-(k+1) for a finite digit word."""
    num = 0
    for d in word:
        num = num * b + int(d)
    return num / b ** len(word)


def periodic_angle(word, b: int) -> float:
    """Angle whose base-b expansion repeats ``word`` forever."""
    num = 0
    for d in word:
        num = num * b + int(d)
    return num / (b ** len(word) - 1)


def circular_distance(a, c):
    d = np.mod(np.asarray(a) - np.asarray(c), 1.0)
    return np.minimum(d, 1.0 - d)


def check_word(word, b: int) -> tuple[int, ...]:
    word = tuple(int(d) for d in word)
    if any(d < 0 or d >= b for d in word):
        raise DomainError(f"digits must lie in 0..{b - 1}")
    return word


# ---------------------------------------------------------------------------
# potential and Böttcher coordinate
# ---------------------------------------------------------------------------

def green_potential(p: MapParams, t, tol: float = 1e-10, max_iter: int = 500) -> float:
    """-ln|psi(t)| for t in the immediate basin of 0, +inf at 0 and off the basin.

    The orbit is followed until |f^n t| < 1e-8 and closed with the near-origin
    Böttcher correction.  An orbit that leaves the unit disk or tends to 1 is
    outside the basin.  A bounded orbit that never collapses is on the
    boundary; we return 0 when the residual bound b^-n |ln min|f^k t|| is
    below ``tol`` and raise Undecided otherwise.
    """
    if t is INFINITY:
        return math.inf
    b = p.b
    log_c = math.log(p.boettcher_coeff)
    z = complex(t)
    smallest = math.inf
    for n in range(max_iter):
        r = abs(z)
        if r < 1e-8:
            if r == 0.0:
                return math.inf
            return -(math.log(r) + log_c) / b ** n
        if r >= 1.0 or abs(z - 1.0) < 1e-6:
            return math.inf
        smallest = min(smallest, r)
        u = z ** b
        z = 4.0 * u / (1.0 + u) ** 2
    bound = -math.log(smallest) / b ** max_iter
    if bound < tol:
        return 0.0
    raise Undecided(f"basin membership of {t!r} undecided after {max_iter} iterations")


def green_potential_array(b: int, t, max_iter: int = 500) -> np.ndarray:
    """Vectorised green_potential; NaN marks undecided points."""
    z = np.array(t, dtype=complex, copy=True)
    out = np.full(z.shape, np.nan)
    active = np.ones(z.shape, dtype=bool)
    log_c = math.log(4.0 ** (1.0 / (b - 1)))
    with np.errstate(all="ignore"):
        for n in range(max_iter):
            r = np.abs(z)
            hit = active & (r < 1e-8)
            out[hit] = -(np.log(r[hit]) + log_c) / float(b) ** n
            away = active & ~hit & ((r >= 1.0) | (np.abs(z - 1.0) < 1e-6) | ~np.isfinite(r))
            out[away] = np.inf
            active &= ~(hit | away)
            if not active.any():
                break
            z = np.where(active, f_array(b, z), 0.0)
    return out


def log_psi_correction(b: int, t, max_factors: int = 400):
    """L(t) = sum_n -2 b^-(n+1) Log(1 + f^n(t)^b) (array-aware)."""
    z = np.array(t, dtype=complex, copy=True)
    acc = np.zeros_like(z)
    weight = 1.0 / b
    with np.errstate(all="ignore"):
        for _ in range(max_factors):
            u = z ** b
            one_u = 1.0 + u
            if np.any((one_u.imag == 0.0) & (one_u.real <= 0.0)):
                warnings.warn("factor 1 + f^n(t)^b on the branch cut", BranchWarning, stacklevel=2)
            term = -2.0 * weight * np.log1p(u)
            acc += term
            if np.all(np.abs(term) < 1e-18 * np.maximum(1.0, np.abs(acc))):
                break
            z = 4.0 * u / one_u ** 2
            weight /= b
    return acc


def boettcher_modulus_phase(p: MapParams, t, n_factors: int = 400) -> complex:
    """psi(t) for t in the open basin, normalised so psi(t_c) = 1."""
    if t is INFINITY or complex(t) == 0:
        raise DomainError("psi is evaluated at finite nonzero basin points")
    t = complex(t)
    return complex(p.boettcher_coeff * t * np.exp(log_psi_correction(p.b, t, n_factors)))


def boettcher_array(b: int, t) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    return 4.0 ** (1.0 / (b - 1)) * t * np.exp(log_psi_correction(b, t))


def _log_psi_jet(b: int, t: complex, max_factors: int = 400) -> Jet:
    """Order-1 jet of log psi at t, for Newton steps."""
    x = Jet.variable(t, 1)
    acc = Jet.variable(t, 1).log() + math.log(4.0 ** (1.0 / (b - 1)))
    weight = 1.0 / b
    for _ in range(max_factors):
        u = x ** b
        term = (1.0 + u).log() * (-2.0 * weight)
        acc = acc + term
        if np.max(np.abs(term.c)) < 1e-18:
            break
        x = f_jet(b, x)
        weight /= b
    return acc


# ---------------------------------------------------------------------------
# geodesic pullback
# ---------------------------------------------------------------------------

def pullback_depth(b: int, potential: float, g0: float = DEEP_SEED_POTENTIAL) -> int:
    if potential >= g0:
        return 0
    return math.ceil(math.log(g0 / potential) / math.log(b) - 1e-12)


def _select_branch(b: int, x, L, target, omega):
    """Pull x back one level, keeping the branch whose psi-angle is nearest target."""
    inner, _ = preimage_u_roots(x)
    L_new = -(2.0 / b) * np.log1p(inner) + L / b
    root = inner ** (1.0 / b)
    cand = root[:, None] * omega[None, :]
    ang = np.mod((np.angle(cand) + L_new.imag[:, None]) / TWO_PI, 1.0)
    dist = circular_distance(ang, target[:, None])
    j = np.argmin(dist, axis=1)
    rows = np.arange(len(x))
    return cand[rows, j], L_new, dist[rows, j], j


def geodesic_points(p: MapParams, thetas, potential: float, return_log: bool = False):
    """Vectorised geodesic pullback at one Green potential for many angles.

    Returns ``(points, ok)`` where ``ok`` flags samples whose branch choice
    stayed unambiguous (distance to target below 1/(4b) turns) at every level.
    With ``return_log`` the final L values are appended.
    """
    if not potential > 0:
        raise DomainError("potential must be positive")
    b = p.b
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    N = pullback_depth(b, potential)
    targets = np.array([[shifted_angle(th, b, k) for k in range(N + 1)] for th in thetas])
    seed_pot = potential * float(b) ** N
    log_c = math.log(p.boettcher_coeff)
    log_w = -seed_pot + 1j * TWO_PI * targets[:, N]
    t = np.exp(log_w - log_c)
    for _ in range(4):
        # psi(t) = c t exp(L(t)) = w  =>  t = exp(log w - log c - L(t))
        t = np.exp(log_w - log_c - log_psi_correction(b, t))
    L = log_psi_correction(b, t)
    omega = np.exp(2j * np.pi * np.arange(b) / b)
    ok = np.ones(len(thetas), dtype=bool)
    with np.errstate(all="ignore"):
        for k in range(N - 1, -1, -1):
            t, L, d, _ = _select_branch(b, t, L, targets[:, k], omega)
            ok &= d < 1.0 / (4 * b)
    ok &= np.isfinite(t)
    if return_log:
        return t, ok, L
    return t, ok


def _homotopy_point(p: MapParams, theta: float, potential: float) -> complex:
    """Fallback: solve at a larger potential, then halve it with Newton on log psi."""
    g = potential
    while True:
        g *= 2.0
        pts, ok = geodesic_points(p, [theta], g)
        if ok[0]:
            t = complex(pts[0])
            break
        if g > DEEP_SEED_POTENTIAL:
            raise BranchAmbiguity(f"no unambiguous anchor for theta={theta}")
    while g > potential:
        g = max(g / 2.0, potential)
        target = -g + 1j * TWO_PI * theta
        for _ in range(50):
            j = _log_psi_jet(p.b, t)
            diff = j.c[0] - target
            diff = diff.real + 1j * ((diff.imag + math.pi) % TWO_PI - math.pi)
            step = complex(diff / j.c[1])
            t -= step
            if abs(step) < 1e-15 * max(1.0, abs(t)):
                break
    return t


def geodesic_point(p: MapParams, theta: float, potential: float) -> complex:
    """Point of the hyperbolic geodesic at angle theta (turns) with Green potential g."""
    pts, ok = geodesic_points(p, [theta], potential)
    if ok[0]:
        return complex(pts[0])
    return _homotopy_point(p, theta, potential)


def boundary_point(p: MapParams, theta: float, g_small: float = 1e-8) -> complex:
    """Approximate landing point of the geodesic at angle theta."""
    if not 0 < g_small <= 1e-4:
        raise DomainError("g_small must lie in (0, 1e-4]")
    return geodesic_point(p, theta, g_small)


# ---------------------------------------------------------------------------
# preimages of t_c and periodic boundary points
# ---------------------------------------------------------------------------

@dataclass
class PreimageTree:
    """Depth-n preimages of t_c, ordered by angle; row i of ``words`` names point i."""

    b: int
    words: np.ndarray    # (b^n, n) int digits, eps_0 first
    points: np.ndarray   # (b^n,) complex

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        for w, z in zip(self.words, self.points):
            yield tuple(int(d) for d in w), complex(z)

    @property
    def angles(self) -> np.ndarray:
        n = self.words.shape[1]
        weights = float(self.b) ** -np.arange(1, n + 1)
        return self.words @ weights


def _root_log(p: MapParams) -> complex:
    # psi(t_c) = 1  =>  L(t_c) = -ln(c t_c)
    return complex(-math.log(p.boettcher_coeff * p.fixed_point.t_c))


def _children(b: int, x, L, omega):
    """All b preimages of every x, plus their psi-angle digits.

    Candidate angles are (theta_parent + j)/b; the digit j is recovered by
    rounding, so labels do not depend on the principal-root convention.
    Returns arrays of shape (len(x), b) ordered by digit.
    """
    inner, _ = preimage_u_roots(x)
    L_new = -(2.0 / b) * np.log1p(inner) + L / b
    root = inner ** (1.0 / b)
    cand = root[:, None] * omega[None, :]
    ang = np.mod((np.angle(cand) + L_new.imag[:, None]) / TWO_PI, 1.0)
    return cand, L_new, ang


def iter_tree_levels(p: MapParams, n: int):
    """Yield (depth, points, L, angles) level by level, ordered by angle."""
    b = p.b
    omega = np.exp(2j * np.pi * np.arange(b) / b)
    x = np.array([p.fixed_point.t_c], dtype=complex)
    L = np.array([_root_log(p)])
    theta = np.zeros(1)
    yield 0, x, L, theta
    for depth in range(1, n + 1):
        cand, L_new, ang = _children(b, x, L, omega)
        # child with digit j has angle (theta + j) / b
        want = (theta[:, None] + np.arange(b)[None, :]) / b
        order = np.argmin(circular_distance(ang[:, :, None], want[:, None, :]), axis=2)
        # order[i, k] = digit of candidate k; invert to get candidate of digit j
        inv = np.argsort(order, axis=1)
        rows = np.arange(len(x))[:, None]
        cand = cand[rows, inv]
        # digit-major layout keeps angles sorted: new angle = (j + theta)/b
        x = cand.T.reshape(-1)
        L = np.repeat(L_new[None, :], b, axis=0).reshape(-1)
        theta = want.T.reshape(-1)
        yield depth, x, L, theta


def preimage_tree_tc(p: MapParams, n: int) -> PreimageTree:
    if not 0 <= n <= 14:
        raise SizeGuard("preimage tree depth must be in 0..14")
    b = p.b
    for depth, x, L, theta in iter_tree_levels(p, n):
        pass
    idx = np.rint(theta * b ** n).astype(np.int64)
    words = np.zeros((len(x), n), dtype=np.int64)
    rem = idx.copy()
    for k in range(n - 1, -1, -1):
        words[:, k] = rem % b
        rem //= b
    return PreimageTree(b=b, words=words, points=x)


@dataclass(frozen=True)
class PeriodicPoint:
    point: complex
    chi: float
    cycle: tuple


def periodic_points_batch(p: MapParams, words: np.ndarray, max_cycles: int = 200, tol: float = 1e-13):
    """Periodic boundary points for many equal-length words at once.

    Returns (points, chi, ok, cycles) where cycles has shape (W, q) and lists
    the orbit point, f(point), ..., f^(q-1)(point).
    """
    b = p.b
    words = np.atleast_2d(np.asarray(words, dtype=np.int64))
    W, q = words.shape
    omega = np.exp(2j * np.pi * np.arange(b) / b)
    x = np.full(W, p.fixed_point.t_c, dtype=complex)
    L = np.full(W, _root_log(p))
    theta = np.zeros(W)
    ok = np.zeros(W, dtype=bool)
    prev_disp = np.full(W, np.inf)
    stalled = np.zeros(W, dtype=int)
    cycle = np.empty((W, q), dtype=complex)
    for _ in range(max_cycles):
        start = x.copy()
        for k in range(q - 1, -1, -1):
            target = (theta + words[:, k]) / b
            x, L, _, _ = _select_branch(b, x, L, target, omega)
            theta = target
            cycle[:, k] = x
        disp = np.abs(x - start)
        stalled = np.where(disp >= prev_disp, stalled + 1, 0)
        prev_disp = disp
        ok = disp < tol
        if ok.all() or (stalled > 3)[~ok].all():
            break
    chi = np.mean(np.log(np.abs(fprime_array(b, cycle))), axis=1)
    return x, chi, ok, cycle


def periodic_boundary_point(p: MapParams, word) -> PeriodicPoint:
    """Fixed point of the inverse-branch composition named by ``word``.

    ``chi`` is the per-step Lyapunov exponent (1/q) ln|(f^q)'| of the cycle.
    """
    word = check_word(word, p.b)
    if not 1 <= len(word) <= 20:
        raise DomainError("word length must be in 1..20")
    x, chi, ok, cycle = periodic_points_batch(p, np.array([word]))
    if not ok[0]:
        raise NonContraction(f"inverse branches for word {word} did not contract")
    return PeriodicPoint(point=complex(x[0]), chi=float(chi[0]), cycle=tuple(complex(c) for c in cycle[0]))


# ---------------------------------------------------------------------------
# harmonic-measure sampling
# ---------------------------------------------------------------------------

@dataclass
class BoundarySample:
    thetas: np.ndarray
    points: np.ndarray
    n_failed: int


def sample_harmonic_boundary(p: MapParams, M: int, g_small: float = 1e-8, seed: int = 0,
                             thetas=None) -> BoundarySample:
    """Landing points for M uniform angles; angle i depends only on (seed, i)."""
    if M < 1:
        raise DomainError("M must be >= 1")
    if thetas is None:
        thetas = _rng.uniforms(seed, M)
    thetas = np.asarray(thetas, dtype=float)
    pts, ok = geodesic_points(p, thetas, g_small)
    n_failed = int((~ok).sum())
    if n_failed > 0.01 * M:
        raise BranchAmbiguity(f"{n_failed} of {M} boundary samples failed")
    return BoundarySample(thetas=thetas[ok], points=pts[ok], n_failed=n_failed)
