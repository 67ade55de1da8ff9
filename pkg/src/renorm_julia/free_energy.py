"""Free-energy series F = sum_n (2b)^-n g(f^n t), g(t) = ln(1 + t^b), and its jets.

Derivatives are accumulated term by term: the orbit jet f^n(t + eps) is
advanced by evaluating f in jet arithmetic, so one code path serves every
order up to four.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationFailure, UnsupportedOrder
from .jets import MAX_ORDER, Jet
from .rational_map import INFINITY, MapParams, f_array, f_jet


@dataclass(frozen=True)
class TruncationPolicy:
    """Halting rule for the orbit series.

    A term stream stops once the orbit jet has collapsed below
    ``stop_radius`` (superattraction at 0 makes the tail vanish doubly
    exponentially) or once the geometric tail estimate drops below ``tol``
    three terms in a row.  The tail rule applies to orders 0 and 1, and to
    higher orders after the derivative part of the orbit jet has gone flat
    (orbits attracted to 1).
    """

    tol: float = 1e-15
    max_terms: int = 400
    stop_radius: float = 1e-16

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.stop_radius <= 1e-6:
            raise ValueError("stop_radius must lie in (0, 1e-6]")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class PhysicalParams:
    J: float
    T: complex

    def __post_init__(self):
        if not self.J > 0:
            raise DomainError("J must be positive")
        if self.T == 0:
            raise DomainError("T must be nonzero")


@dataclass(frozen=True)
class FJet:
    """F and its complex derivatives at one point; unrequested orders are None."""

    F: complex
    dF: complex | None = None
    d2F: complex | None = None
    d3F: complex | None = None
    d4F: complex | None = None

    def derivative(self, k: int) -> complex:
        v = (self.F, self.dF, self.d2F, self.d3F, self.d4F)[k]
        if v is None:
            raise UnsupportedOrder(f"order {k} was not evaluated")
        return v


def g_jet(b: int, x: Jet) -> Jet:
    return (1.0 + x ** b).log()


def g_derivatives(b: int, t, order: int) -> np.ndarray:
    """[g, g', ..., g^(order)] at t (array-aware)."""
    return g_jet(b, Jet.variable(t, order)).derivatives()


def series_derivatives(b: int, t, order: int, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Vectorised F^(k)(t), k = 0..order, shape (order + 1,) + shape(t).

    Raises TruncationFailure if any point has not met the halting rule after
    ``policy.max_terms`` terms.
    """
    if not 0 <= order <= MAX_ORDER:
        raise UnsupportedOrder(f"order must be in 0..{MAX_ORDER}, got {order}")
    t = np.asarray(t, dtype=complex)
    x = Jet.variable(t, order)
    acc = np.zeros_like(x.c)
    active = np.ones(t.shape, dtype=bool)
    quiet = np.zeros(t.shape, dtype=int)
    q = 1.0 / (2 * b) if order == 0 else 1.0 / math.sqrt(2.0)
    weight = 1.0
    with np.errstate(all="ignore"):
        for _ in range(policy.max_terms):
            term = g_jet(b, x).c * weight
            acc += np.where(active, term, 0.0)
            collapsed = x.max_abs() < policy.stop_radius
            # once the orbit jet is flat only the value term is left, and
            # its tail is geometric with ratio 1/2b
            flat = np.max(np.abs(x.c[1:]), axis=0) < policy.stop_radius if order else True
            if order <= 1 or flat.any():
                qq = np.where(flat, 1.0 / (2 * b), q)
                tail = np.max(np.abs(term), axis=0) * qq / (1.0 - qq)
                ok = (tail < policy.tol) & (flat | (order <= 1))
                quiet = np.where(ok, quiet + 1, 0)
                collapsed |= quiet >= 3
            active &= ~collapsed
            if not active.any():
                break
            x = f_jet(b, x)
            weight /= 2 * b
        else:
            raise TruncationFailure(
                f"{int(active.sum())} point(s) unresolved after {policy.max_terms} terms"
            )
    fact = np.array([math.factorial(k) for k in range(order + 1)], dtype=float)
    return acc * fact.reshape((-1,) + (1,) * t.ndim)


def policy_for_potential(p: MapParams, potential: float, base: TruncationPolicy = DEFAULT_POLICY,
                         g0: float = 18.0) -> TruncationPolicy:
    """Widen max_terms to depth + 64 for points at small Green potential."""
    depth = 0 if potential >= g0 else math.ceil(math.log(g0 / potential, p.b))
    return TruncationPolicy(base.tol, max(base.max_terms, depth + 64), base.stop_radius)


# ---------------------------------------------------------------------------
# scalar operations
# ---------------------------------------------------------------------------

def temperature_to_t(pp: PhysicalParams, b: int) -> complex:
    """t0 = G(T) = exp(-2J / (bT))."""
    if pp.T == 0:
        raise DomainError("T must be nonzero")
    return cmath.exp(-2.0 * pp.J / (b * complex(pp.T)))


def eval_F_jet(p: MapParams, t, policy: TruncationPolicy = DEFAULT_POLICY, order: int = 2) -> FJet:
    if t is INFINITY:
        raise DomainError("F is evaluated at finite points only")
    d = series_derivatives(p.b, complex(t), order, policy)
    vals = [complex(v) for v in d] + [None] * (MAX_ORDER - order)
    return FJet(*vals)


def eval_physical_free_energy(pp: PhysicalParams, b: int, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """-J/2 - (T/2) F(G(T))."""
    t0 = temperature_to_t(pp, b)
    F = complex(series_derivatives(b, t0, 0, policy)[0])
    return -pp.J / 2.0 - complex(pp.T) / 2.0 * F


def direct_free_energy(pp: PhysicalParams, b: int, n_terms: int = 200) -> complex:
    """Plain partial sum of the free-energy formula with explicitly iterated t_n."""
    t = temperature_to_t(pp, b)
    s = 0j
    for n in range(n_terms):
        s += (2.0 * b) ** (-n) * cmath.log(1.0 + t ** b)
        t = 4.0 * t ** b / (1.0 + t ** b) ** 2
    return -pp.J / 2.0 - complex(pp.T) / 2.0 * s


@dataclass(frozen=True)
class FunctionalResiduals:
    r0: complex
    r1: complex
    r2: complex


def functional_residuals_array(b: int, t, policy: TruncationPolicy = DEFAULT_POLICY):
    """Residuals of the renormalization identities for F, F', F'' (vectorised).

    r0 = F(ft)/2b - F(t) + g(t)
    r1 = f'(t) F'(ft)/2b - F'(t) + g'(t)
    r2 = beta(t) F''(ft) - F''(t) + h(t),  beta = f'^2/2b,  h = F'(ft) f''/2b + g''

    F at t and at f(t) come from two independent series evaluations.
    """
    t = np.asarray(t, dtype=complex)
    two_b = 2.0 * b
    Ft = series_derivatives(b, t, 2, policy)
    fj = f_jet(b, Jet.variable(t, 2)).derivatives()
    Ff = series_derivatives(b, fj[0], 2, policy)
    gd = g_derivatives(b, t, 2)
    beta = fj[1] ** 2 / two_b
    h = Ff[1] * fj[2] / two_b + gd[2]
    r0 = Ff[0] / two_b - Ft[0] + gd[0]
    r1 = fj[1] * Ff[1] / two_b - Ft[1] + gd[1]
    r2 = beta * Ff[2] - Ft[2] + h
    return r0, r1, r2


def functional_residuals(p: MapParams, t, policy: TruncationPolicy = DEFAULT_POLICY) -> FunctionalResiduals:
    r0, r1, r2 = functional_residuals_array(p.b, complex(t), policy)
    return FunctionalResiduals(complex(r0), complex(r1), complex(r2))


def cocycle_source(b: int, t, policy: TruncationPolicy = DEFAULT_POLICY):
    """h(t) = F'(f t) f''(t) / 2b + g''(t), the source term of the F'' equation."""
    t = np.asarray(t, dtype=complex)
    fj = f_jet(b, Jet.variable(t, 2)).derivatives()
    Fp = series_derivatives(b, fj[0], 1, policy)[1]
    return Fp * fj[2] / (2.0 * b) + g_derivatives(b, t, 2)[2]


def cocycle_solution_array(b: int, t, policy: TruncationPolicy = DEFAULT_POLICY):
    """U(t) = sum_n beta_n(t) h(f^n t) with beta_n the multiplicative cocycle of f'^2/2b."""
    t = np.asarray(t, dtype=complex)
    z = t.copy()
    beta_n = np.ones_like(z)
    acc = np.zeros_like(z)
    active = np.ones(t.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(policy.max_terms):
            zz = np.where(active, z, 0.0)
            term = beta_n * cocycle_source(b, zz, policy)
            acc += np.where(active, term, 0.0)
            u = zz ** b
            fp = 4.0 * b * zz ** (b - 1) * (1.0 - u) / (1.0 + u) ** 3
            beta_n = beta_n * fp ** 2 / (2.0 * b)
            done = (np.abs(beta_n) < policy.stop_radius * policy.tol) | (np.abs(zz) < policy.stop_radius)
            active &= ~done
            if not active.any():
                break
            z = f_array(b, zz)
        else:
            raise TruncationFailure("cocycle series did not collapse")
    return acc


def cocycle_solution_U(p: MapParams, t, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    return complex(cocycle_solution_array(p.b, complex(t), policy))
