"""The renormalization map f(t) = 4 t^b / (1 + t^b)^2 on the Riemann sphere.

Points of the sphere are plain Python ``complex`` numbers or the singleton
:data:`INFINITY`.  Array routines (prefixed ``f_`` or taking ndarrays) work on
finite values only and are what the heavier modules build on.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from scipy import optimize

from .errors import BranchAmbiguity, DomainError, NonConvergence, PoleError
from .jets import MAX_ORDER, Jet


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
ComplexValue = Union[complex, _Infinity]

# |1 + t^b| below this multiple of eps * (1 + |t|^b) is treated as an exact pole.
_POLE_ULPS = 64.0
_EPS = np.finfo(float).eps


def is_infinity(z) -> bool:
    return z is INFINITY


@dataclass(frozen=True)
class MapParams:
    """Branching number ``b`` of the diamond lattice and derived constants."""

    b: int

    def __post_init__(self):
        if isinstance(self.b, bool) or not isinstance(self.b, (int, np.integer)):
            raise TypeError("b must be an integer")
        if self.b < 2:
            raise DomainError(f"b must be >= 2, got {self.b}")
        object.__setattr__(self, "b", int(self.b))

    @property
    def two_b(self) -> int:
        return 2 * self.b

    @property
    def alpha_c(self) -> float:
        """Predicted complex critical exponent 1 - ln2/ln b."""
        return 1.0 - math.log(2.0) / math.log(self.b)

    @property
    def boettcher_coeff(self) -> float:
        """c with c^(b-1) = 4, so that psi(t) ~ c t near the origin."""
        return 4.0 ** (1.0 / (self.b - 1))

    @cached_property
    def fixed_point(self) -> "FixedPointInfo":
        return find_unstable_fixed_point(self)


@dataclass(frozen=True)
class FixedPointInfo:
    t_c: float
    multiplier: float


def _is_pole(t: complex, u: complex) -> bool:
    return abs(1.0 + u) <= _POLE_ULPS * _EPS * (1.0 + abs(u))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def eval_map(p: MapParams, t: ComplexValue) -> ComplexValue:
    """f(t) on the sphere; f(inf) = 0 and f = inf exactly where t^b = -1."""
    if t is INFINITY:
        return 0j
    t = complex(t)
    if abs(t) > 1e30:
        # f(1/t) = f(t); avoids overflow in t^b
        t = 1.0 / t
    u = t ** p.b
    if _is_pole(t, u):
        return INFINITY
    return 4.0 * u / (1.0 + u) ** 2


def f_array(b: int, t):
    """Vectorised f for finite arrays (poles give complex inf/nan)."""
    u = np.asarray(t, dtype=complex) ** b
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return 4.0 * u / (1.0 + u) ** 2


def fprime_array(b: int, t):
    """Closed-form f'(t) = 4b t^(b-1) (1 - t^b) / (1 + t^b)^3."""
    t = np.asarray(t, dtype=complex)
    u = t ** b
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return 4.0 * b * t ** (b - 1) * (1.0 - u) / (1.0 + u) ** 3


def f_jet(b: int, x: Jet) -> Jet:
    """Compose f with a jet by evaluating the rational expression in jet arithmetic."""
    u = x ** b
    return 4.0 * u / ((1.0 + u) * (1.0 + u))


def map_jet(p: MapParams, t: complex, order: int) -> list[complex]:
    """Return ``[f(t), f'(t), ..., f^(order)(t)]`` via truncated-polynomial arithmetic."""
    if t is INFINITY:
        raise PoleError("map_jet needs a finite point")
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}")
    t = complex(t)
    u = t ** p.b
    if _is_pole(t, u):
        raise PoleError(f"1 + t^b vanishes at t={t!r}")
    d = f_jet(p.b, Jet.variable(t, order)).derivatives()
    return [complex(v) for v in d]


# ---------------------------------------------------------------------------
# structural decomposition f = K o S, phi K phi^-1 = T
# ---------------------------------------------------------------------------

def power_map(p: MapParams, t: ComplexValue) -> ComplexValue:
    """S(t) = t^b."""
    if t is INFINITY:
        return INFINITY
    return complex(t) ** p.b


def koebe(u: ComplexValue) -> ComplexValue:
    """K(u) = 4u / (1+u)^2, the rescaled Koebe function -4 K0(-u)."""
    if u is INFINITY:
        return 0j
    u = complex(u)
    if abs(1.0 + u) <= _POLE_ULPS * _EPS * (1.0 + abs(u)):
        return INFINITY
    return 4.0 * u / (1.0 + u) ** 2


def mobius(t: ComplexValue) -> ComplexValue:
    """phi(t) = (1+t)/(1-t), sending {0, 1, inf} to {1, inf, -1}."""
    if t is INFINITY:
        return -1.0 + 0j
    t = complex(t)
    if t == 1:
        return INFINITY
    return (1.0 + t) / (1.0 - t)


def chebyshev(tau: ComplexValue) -> ComplexValue:
    """T(tau) = 2 tau^2 - 1."""
    if tau is INFINITY:
        return INFINITY
    tau = complex(tau)
    return 2.0 * tau * tau - 1.0


@dataclass(frozen=True)
class Decomposition:
    s: ComplexValue           # S(t)
    k_of_s: ComplexValue      # K(S(t)) == f(t)
    k: ComplexValue           # K(t)
    phi: ComplexValue         # phi(t)
    phi_of_k: ComplexValue    # phi(K(t))
    tcheb_of_phi: ComplexValue  # T(phi(t)) == phi(K(t))


def decompose(p: MapParams, t: ComplexValue) -> Decomposition:
    s = power_map(p, t)
    k = koebe(t)
    ph = mobius(t)
    return Decomposition(
        s=s, k_of_s=koebe(s), k=k, phi=ph, phi_of_k=mobius(k), tcheb_of_phi=chebyshev(ph)
    )


# ---------------------------------------------------------------------------
# critical orbits and the unstable fixed point
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalOrbit:
    point: ComplexValue
    kind: str          # "zero", "infinity", "root_of_unity", "root_of_minus_one"
    limit: int         # 0 or 1
    iterations: int    # first n with f^n(point) within eps of the limit


def critical_points(p: MapParams) -> list[tuple[ComplexValue, str]]:
    b = p.b
    pts: list[tuple[ComplexValue, str]] = [(0j, "zero"), (INFINITY, "infinity")]
    pts += [(cmath.exp(2j * math.pi * k / b), "root_of_unity") for k in range(b)]
    pts += [(cmath.exp(1j * math.pi * (2 * k + 1) / b), "root_of_minus_one") for k in range(b)]
    return pts


def critical_orbits(p: MapParams, max_iter: int = 50, eps: float = 1e-12) -> list[CriticalOrbit]:
    """Follow every critical point of f until it lands within eps of 0 or 1."""
    if max_iter < 3:
        raise ValueError("max_iter must be >= 3")
    report = []
    for point, kind in critical_points(p):
        z = point
        for n in range(max_iter + 1):
            if z is not INFINITY:
                if abs(z) <= eps:
                    report.append(CriticalOrbit(point, kind, 0, n))
                    break
                if abs(z - 1.0) <= eps:
                    report.append(CriticalOrbit(point, kind, 1, n))
                    break
            z = eval_map(p, z)
        else:
            raise NonConvergence(f"critical point {point!r} did not settle in {max_iter} steps")
    return report


def find_unstable_fixed_point(p: MapParams, delta: float = 1e-6) -> FixedPointInfo:
    """The repelling real fixed point t_c in (0, 1) and its multiplier f'(t_c)."""
    b = p.b

    def h(t):
        return 4.0 * t ** b / (1.0 + t ** b) ** 2 - t

    grid = np.linspace(delta, 1.0 - delta, 1001)
    vals = h(grid)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if len(idx) != 1:
        raise NonConvergence(f"expected one interior sign change of f(t)-t, found {len(idx)}")
    lo, hi = grid[idx[0]], grid[idx[0] + 1]
    t = optimize.bisect(h, lo, hi, xtol=1e-15, rtol=4 * _EPS, maxiter=200)
    for _ in range(3):
        u = t ** b
        fp = 4.0 * b * t ** (b - 1) * (1.0 - u) / (1.0 + u) ** 3
        step = h(t) / (fp - 1.0)
        t -= step
        if abs(step) < 1e-17:
            break
    u = t ** b
    lam = 4.0 * b * t ** (b - 1) * (1.0 - u) / (1.0 + u) ** 3
    return FixedPointInfo(t_c=float(t), multiplier=float(lam))


# ---------------------------------------------------------------------------
# inverse branches
# ---------------------------------------------------------------------------

def preimage_u_roots(x):
    """Roots of x u^2 + (2x - 4) u + x = 0 as (inner, outer), inner*outer = 1.

    Uses u = (1 +- sqrt(1-x))^2 / x; the principal root has Re >= 0, so the
    "+" branch is the larger one and the inner root is formed without
    cancellation as x / (1 + sqrt(1-x))^2.
    """
    x = np.asarray(x, dtype=complex)
    w = (1.0 + np.sqrt(1.0 - x)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        return x / w, w / x


def _roots_of_unity(b: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(b) / b)


def basin_preimages(p: MapParams, x: ComplexValue) -> list[complex]:
    """The b preimages of x lying in the closed unit disk (branch |u| < 1)."""
    if x is INFINITY:
        raise DomainError("x must be finite")
    x = complex(x)
    if x.imag == 0.0 and x.real >= 1.0:
        raise DomainError(f"x={x!r} lies on [1, inf), the image of the unit circle")
    if x == 0:
        return [0j] * p.b
    inner, outer = preimage_u_roots(x)
    if abs(abs(inner) - 1.0) < 1e-12 and abs(abs(outer) - 1.0) < 1e-12:
        raise BranchAmbiguity(f"both u-roots are on the unit circle for x={x!r}")
    r = complex(inner) ** (1.0 / p.b)
    return [complex(r * w) for w in _roots_of_unity(p.b)]


def all_preimages(p: MapParams, x: ComplexValue) -> list[ComplexValue]:
    """All preimages of x under f, with multiple roots listed once."""
    b = p.b
    w = _roots_of_unity(b)
    if x is INFINITY:
        return [complex(v) for v in np.exp(1j * np.pi / b) * w]
    x = complex(x)
    if x == 0:
        return [0j, INFINITY]
    if x == 1:
        return [complex(v) for v in w]
    inner, outer = preimage_u_roots(x)
    out: list[ComplexValue] = []
    for u in (complex(inner), complex(outer)):
        r = u ** (1.0 / b)
        out.extend(complex(r * v) for v in w)
    return out
