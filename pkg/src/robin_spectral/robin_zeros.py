"""Robin cross zeros: roots of k J_{nu+l+1}(k) - (sigma + l) J_{nu+l}(k).

The first root for l = 0 is the square root of the first Robin eigenvalue
of the unit ball; the l = 1 root gives the second.  Also provides the
sigma -> 0 limit object h(k) = k J_{nu+2}(k)/J_{nu+1}(k) - 1 and its
unique zero k_* in (0, j_{nu+1,1}).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError
from .special import bessel_j, classical_zero

_LEFT_ANCHOR = 1e-8
_EDGE_SHAVE = 1e-9
_ROOT_XTOL = 1e-13


@dataclass(frozen=True)
class CrossZeroQuery:
    """Which cross zero: order shift l in {0, 1}, Robin parameter sigma > 0."""

    nu: float
    l: int
    sigma: float
    m: int = 1

    def __post_init__(self):
        if self.nu < 0.0:
            raise DomainError(f"nu must be >= 0, got {self.nu}")
        if self.l not in (0, 1):
            raise DomainError(f"order shift l must be 0 or 1, got {self.l}")
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.m < 1 or int(self.m) != self.m:
            raise DomainError(f"zero index m must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class CrossZero:
    query: CrossZeroQuery
    k: float


def cross_fn(nu: float, l: int, sigma: float, k: float) -> float:
    """k J_{nu+l+1}(k) - (sigma + l) J_{nu+l}(k) at k > 0."""
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    order = nu + l
    return k * bessel_j(order + 1.0, k) - (sigma + l) * bessel_j(order, k)


def cross_zero(query: CrossZeroQuery) -> CrossZero:
    """The m-th positive cross zero.

    For m = 1 the root lies in (0, j_{nu+l,1}): the function starts negative
    (leading small-k form is -(sigma+l) (k/2)^{nu+l} / Gamma(nu+l+1)) and is
    positive just below j_{nu+l,1} where the J_{nu+l} term vanishes.  Roots
    for m > 1 sit between consecutive classical zeros.
    """
    nu, l, sigma, m = query.nu, query.l, query.sigma, query.m
    order = nu + l
    if m == 1:
        lo, hi = _LEFT_ANCHOR, classical_zero(order, 1) - _EDGE_SHAVE
    else:
        lo = classical_zero(order, m - 1) + _EDGE_SHAVE
        hi = classical_zero(order, m) - _EDGE_SHAVE
    f = lambda k: cross_fn(nu, l, sigma, k)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return CrossZero(query, lo)
    if fhi == 0.0:
        return CrossZero(query, hi)
    if flo * fhi > 0.0:
        raise BracketError(
            f"cross function has no sign change on ({lo:g}, {hi:g}) "
            f"for nu={nu}, l={l}, sigma={sigma}, m={m}"
        )
    return CrossZero(query, brentq(f, lo, hi, xtol=_ROOT_XTOL, rtol=1e-15))


def first_cross_zeros(nu: float, sigma: float) -> tuple[float, float]:
    """(k_{nu,1}, k_{nu+1,1}) for the given sigma: the unit-ball pair."""
    a = cross_zero(CrossZeroQuery(nu=nu, l=0, sigma=sigma)).k
    b = cross_zero(CrossZeroQuery(nu=nu, l=1, sigma=sigma)).k
    return a, b


def h_fn(nu: float, k: float) -> float:
    """h(k) = k J_{nu+2}(k)/J_{nu+1}(k) - 1 on (0, j_{nu+1,1}), h(0+) = -1."""
    if not 0.0 < k < classical_zero(nu + 1.0, 1):
        raise DomainError(
            f"h is only defined on (0, j_(nu+1,1)) = (0, {classical_zero(nu + 1.0, 1):.6f}), got {k}"
        )
    return k * bessel_j(nu + 2.0, k) / bessel_j(nu + 1.0, k) - 1.0


def k_star(nu: float) -> float:
    """Unique zero of h on (0, j_{nu+1,1}); the sigma -> 0 limit of k_{nu+1,1}."""
    hi = classical_zero(nu + 1.0, 1) - _EDGE_SHAVE
    lo = 1e-6
    # side check: h must be strictly increasing on a coarse grid
    grid = np.linspace(lo, hi, 33)
    values = [h_fn(nu, float(t)) for t in grid]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise BracketError(f"h is not increasing on (0, j_(nu+1,1)) for nu={nu}")
    if values[0] >= 0.0 or values[-1] <= 0.0:
        raise BracketError(f"h has no sign change on (0, j_(nu+1,1)) for nu={nu}")
    return brentq(lambda k: h_fn(nu, k), lo, hi, xtol=_ROOT_XTOL, rtol=1e-15)
